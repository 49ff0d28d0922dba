#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bdikit/configuration.hpp"
#include "bdikit/engine.hpp"
#include "bdikit/model.hpp"
#include "bdikit/rng.hpp"
#include "bdikit/stats.hpp"

namespace bdikit {

struct TrajectoryRecord {
  enum class Kind { grid, event };
  double time = 0.0;
  Kind kind = Kind::grid;
  std::size_t grid_index = 0;  ///< meaningful for grid records
  Configuration config;
};

/// Recorded path: one record per dt-gridpoint and one per jump (the
/// configuration right after it), plus the event log.
struct Trajectory {
  int dim = 1;
  double dt = 0.0;
  double horizon = 0.0;
  std::vector<TrajectoryRecord> records;
  std::vector<EventLogEntry> events;
};

/// Sink that stores every record.
class TrajectoryRecorder : public Sink {
 public:
  TrajectoryRecorder(int dim, double dt, double horizon);
  bool on_gridpoint(std::size_t index, double t, const Configuration& config) override;
  void on_event(const EventLogEntry& event, const Configuration& after) override;
  Trajectory take() { return std::move(traj_); }

 private:
  Trajectory traj_;
};

struct SimulationOptions {
  std::size_t max_population = 100000;
  std::size_t max_events = 1000000;
};

Trajectory simulate(const model::ModelSpec& spec, const Configuration& init, double horizon, double dt, Rng& rng,
                    const SimulationOptions& options = {});

/// As simulate with the immigration rate forced to 0.
Trajectory simulate_branching_only(const model::ModelSpec& spec, const Configuration& ancestors, double horizon,
                                   double dt, Rng& rng, const SimulationOptions& options = {});

/// Named real functional of the configuration, integrated in time.
struct Functional {
  std::string name;
  std::function<double(const Configuration&)> f;
};

/// l^1 .. l^q, named "ell^p".
std::vector<Functional> count_power_functionals(int q);
std::string count_power_name(int p);
/// Indicator of the void configuration, named "void".
Functional void_indicator();

/// Product-bin grid over a box.
struct HistogramGrid {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<std::size_t> bins;  ///< per axis

  static HistogramGrid uniform_1d(double lo, double hi, std::size_t bins);
  std::size_t dim() const { return lo.size(); }
  std::size_t size() const;
  double bin_volume() const;
  /// Flat bin index, or size() when x is outside the box.
  std::size_t index_of(ConstPoint x) const;
  /// Center of bin `flat` along axis `axis`.
  double center(std::size_t flat, std::size_t axis) const;
};

/// Time-integrated particle counts per bin.
struct OccupationHistogram {
  HistogramGrid grid;
  std::vector<double> mass;
  double total_time = 0.0;

  void add(const Configuration& config, double duration);
  /// mass / (total_time * bin volume)
  std::vector<double> density() const;
};

struct RegenerativeOptions {
  /// Excursions longer than this are abandoned and counted.
  double time_cap = 1e5;
  std::size_t max_population = 100000;
  std::size_t max_events = 1000000;
  std::optional<HistogramGrid> histogram;
};

/// Accumulated integrals over completed excursions from the void configuration.
struct ExcursionStats {
  std::size_t cycle_count = 0;
  std::size_t abandoned_cycles = 0;
  double total_time = 0.0;
  double time_at_void = 0.0;
  std::vector<std::string> names;
  std::vector<double> integrals;  ///< per functional, summed over cycles
  std::vector<double> cycle_lengths;
  std::vector<double> cycle_void_times;
  std::vector<std::vector<double>> cycle_integrals;  ///< [functional][cycle]
  std::optional<OccupationHistogram> histogram;

  /// Position of a functional by name; throws PreconditionError if absent.
  std::size_t index_of(const std::string& name) const;
};

/// Simulates n_cycles excursions: each starts at the void configuration and
/// ends at the first return to it. Integrals use the left-point rule on
/// every piece between consecutive records.
ExcursionStats run_regenerative(const model::ModelSpec& spec, std::size_t n_cycles, double dt,
                                const std::vector<Functional>& functionals, Rng& rng,
                                const RegenerativeOptions& options = {});

/// Ratio estimate of mu(g) = accumulated integral / total time, with cycle-bootstrap SE.
stats::Estimate functional_mean(const ExcursionStats& stats, const std::string& name);

/// Ratio estimate of mu(void) = time_at_void / total_time.
stats::Estimate void_fraction(const ExcursionStats& stats);

/// Occupation density from a regenerative run that carried a histogram.
std::vector<double> occupation_histogram(const ExcursionStats& stats);

/// Occupation histogram of a recorded trajectory (left-point rule over records).
OccupationHistogram occupation_histogram(const Trajectory& trajectory, const HistogramGrid& grid);

/// Estimates of mu(l^p), p = 1..q; needs the count_power_functionals(q) accumulators.
std::vector<stats::Estimate> particle_count_moments(const ExcursionStats& stats, int q);

}  // namespace bdikit
