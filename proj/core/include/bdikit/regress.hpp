#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bdikit/configuration.hpp"
#include "bdikit/kernel.hpp"
#include "bdikit/model.hpp"
#include "bdikit/observe.hpp"
#include "bdikit/partition.hpp"
#include "bdikit/rng.hpp"

namespace bdikit {

struct SchemeEntry {
  bool filled = false;
  std::size_t tau = 0;       ///< pair index i of (x_i, x_{i+1})
  std::size_t particle = 0;  ///< canonical index m in x_tau
  std::vector<double> x;     ///< X_alpha
  std::vector<double> z;     ///< Z_alpha = (y_pi(m) - x_m) / sqrt(delta)
  bool good = true;          ///< truth segment at tau was CI
};

struct RegressionScheme {
  CellPartition cells;
  double delta = 0.0;
  double lambda = 0.0;
  std::vector<SchemeEntry> entries;  ///< by flat cell index
  std::size_t tau_star = 0;
  std::size_t filled_count = 0;

  std::vector<std::size_t> unfilled() const;
};

/// Fills the scheme pair by pair. A cell is filled at the first identifiable
/// pair whose first configuration has a particle in it; among several such
/// particles the smallest canonical index is used.
class SchemeFiller {
 public:
  SchemeFiller(const CellPartition& cells, double delta, double lambda);
  /// Processes the next pair; truth may be null (good flags then stay true).
  void add_pair(const Configuration& x, const Configuration& y, const SegmentRecord* truth);
  std::size_t pairs_seen() const { return next_index_; }
  /// True when every cell meeting the open interval (lo, hi) is filled (d = 1).
  bool window_filled(double lo, double hi) const;
  const RegressionScheme& scheme() const { return scheme_; }
  RegressionScheme take() { return std::move(scheme_); }

 private:
  RegressionScheme scheme_;
  std::size_t next_index_ = 0;
  std::size_t first_open_ = 0;
};

RegressionScheme fill_scheme(const std::vector<Configuration>& observations, const std::vector<SegmentRecord>& truth,
                             const CellPartition& cells, double delta, double lambda);

/// Bandwidth n^(-1/(2 beta + 1)).
double bandwidth(std::size_t n, double beta);

/// Kernel estimate sum_alpha length(A_alpha) Z_alpha^2 K_h(X_alpha - a), d = 1.
/// Requires the support window [a - h, a + h] inside the cube, every cell
/// meeting it filled, and kernel order equal to the largest integer below beta.
double estimate_sigma2(const RegressionScheme& scheme, const Kernel& kernel, double beta, double a);

/// Sum over filled cells of length * weight(alpha) * K_h(X_alpha - a), the
/// estimator with Z_alpha^2 replaced by an arbitrary per-cell weight.
double kernel_sum(const RegressionScheme& scheme, const Kernel& kernel, double h, double a,
                  const std::vector<double>& weights);

struct EstimateReport {
  double a = 0.0;
  double estimate = 0.0;
  std::optional<double> truth;
  double delta = 0.0;
  std::size_t n = 0;
  double h = 0.0;
  double beta = 0.0;
  double lambda = 0.0;
  double squared_error = 0.0;
  double rescaled_error = 0.0;  ///< n^(2 beta/(2 beta + 1)) * squared_error
  bool had_bad_entry = false;   ///< some entry in the support window was not CI
  double fill_time = 0.0;
};

struct SweepRow {
  double delta = 0.0;
  std::size_t n = 0;
  double h = 0.0;
  double lambda = 0.0;
  double beta = 0.0;
  double mse = 0.0;
  double mse_se = 0.0;
  double rescaled_mse = 0.0;
  double f_event_frequency = 0.0;
  std::size_t replicates = 0;
  std::size_t dropped = 0;
  double mean_estimate = 0.0;
  std::vector<EstimateReport> reports;
};

struct SweepOptions {
  /// Simulated time allowed per replicate before it is dropped.
  double max_time = 1e4;
  std::size_t max_population = 100000;
  std::size_t max_events = 1000000;
  /// Time simulated from the void configuration before observation starts.
  double burn_in = 0.0;
};

/// Pointwise risk of the estimator across delta values (d = 1). Each
/// replicate starts at the void configuration, runs for burn_in, then
/// observes at step delta (dt = delta / round(dt_ratio)) until the support
/// window around a is filled. Replicate r of delta index k uses the stream
/// derived from (seed of rng, k * replicates + r).
std::vector<SweepRow> risk_sweep(const model::ModelSpec& spec, const Box& cube, double a, double beta,
                                 double lambda, const std::vector<double>& delta_list, std::size_t replicates,
                                 double dt_ratio, Rng& rng, const SweepOptions& options = {});

/// One replicate of risk_sweep; throws ExplosionError or returns nullopt when
/// the time cap is hit before the window fills.
std::optional<EstimateReport> estimate_once(const model::ModelSpec& spec, const Box& cube, double a, double beta,
                                            double lambda, double delta, double dt_ratio, Rng& rng,
                                            const SweepOptions& options = {});

}  // namespace bdikit
