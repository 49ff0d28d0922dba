#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "bdikit/configuration.hpp"
#include "bdikit/model.hpp"
#include "bdikit/rng.hpp"
#include "bdikit/sde.hpp"

namespace bdikit {

struct EventLogEntry {
  enum class Kind { death, branch, immigration };
  double time = 0.0;
  Kind kind = Kind::death;
  int k = 0;                    ///< offspring count for death/branch
  std::uint64_t parent_id = 0;  ///< dying particle, or the immigrant itself
  std::vector<double> site;     ///< parent position at death, or the immigrant position
  std::vector<std::uint64_t> child_ids;
  std::vector<double> child_offsets;  ///< k * dim, particle-major
};

std::string to_string(EventLogEntry::Kind kind);

/// Receives the simulated path. Records arrive in time order; on_segment
/// covers [t0, t1) between two consecutive records and carries the
/// configuration at t0.
class Sink {
 public:
  virtual ~Sink() = default;
  virtual void on_segment(double /*t0*/, double /*t1*/, const Configuration& /*at_t0*/) {}
  /// Return false to stop the run after this gridpoint.
  virtual bool on_gridpoint(std::size_t /*index*/, double /*t*/, const Configuration& /*config*/) { return true; }
  virtual void on_event(const EventLogEntry& /*event*/, const Configuration& /*after*/) {}
};

struct EngineOptions {
  double dt = 0.01;
  double horizon = std::numeric_limits<double>::infinity();
  bool immigration = true;
  /// Stop as soon as a jump leaves the void configuration.
  bool stop_at_void = false;
  std::size_t max_population = 100000;
  std::size_t max_events = 1000000;
};

struct RunResult {
  enum class Status { horizon, void_reached, stopped };
  Status status = Status::horizon;
  double end_time = 0.0;
  std::size_t events = 0;
  std::uint64_t next_id = 0;
};

/// Simulates the particle system from init.
///
/// Between jumps every particle takes Euler steps on the grid k*dt. Jump
/// times are proposed at the constant rate c + kill_rate_bound * l and
/// thinned: an immigration proposal is always accepted, a proposal for
/// particle j is accepted with probability kappa(x_j)/kill_rate_bound at the
/// particle's (bridge-interpolated) position. The proposal clock is redrawn
/// after every proposal. Children take the parent's slot in the ordering,
/// immigrants are appended.
///
/// Particles without ids in init get ids 0..l-1; new particles get
/// consecutive ids from next_id (default: one past the largest id in init).
RunResult run_engine(const model::ModelSpec& spec, const Configuration& init, const EngineOptions& options,
                     Rng& rng, Sink& sink, std::uint64_t next_id = 0);

}  // namespace bdikit
