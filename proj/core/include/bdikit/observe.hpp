#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "bdikit/bdi.hpp"
#include "bdikit/configuration.hpp"
#include "bdikit/engine.hpp"

namespace bdikit {

/// Continuous-time truth about observation interval [i*delta, (i+1)*delta].
/// start_config and end_config are in canonical order with ids, so particle
/// k of start_config is particle k of observation i.
struct SegmentRecord {
  std::size_t interval_index = 0;
  bool had_event = false;
  Configuration start_config;
  Configuration end_config;
  /// Per-particle true increments aligned with start_config (l * d values);
  /// empty when had_event is true.
  std::vector<double> increments;

  /// Continuously identifiable: no event, l >= 1, start 4 delta^lambda-wellspread
  /// and every true increment below delta^lambda in every coordinate.
  bool ci_flag(double delta, double lambda) const;
};

struct ObservationData {
  double delta = 0.0;
  std::vector<Configuration> observations;  ///< canonical order, no ids
  std::vector<SegmentRecord> truth;         ///< truth[i] covers observations i -> i+1
};

/// Streaming observer: turns engine output into observations at multiples of
/// delta (which must be an integer multiple of dt) and their truth records.
class ObservationCollector : public Sink {
 public:
  /// Called for each completed pair (x_i, x_{i+1}); return false to stop the run.
  using PairCallback =
      std::function<bool(const Configuration& x, const Configuration& y, const SegmentRecord& truth)>;

  ObservationCollector(double delta, double dt, bool store = true);
  void set_pair_callback(PairCallback cb) { callback_ = std::move(cb); }

  bool on_gridpoint(std::size_t index, double t, const Configuration& config) override;
  void on_event(const EventLogEntry& event, const Configuration& after) override;

  std::size_t pair_count() const { return pairs_; }
  const ObservationData& data() const { return data_; }
  ObservationData take() { return std::move(data_); }

 private:
  std::size_t stride_;
  bool store_;
  PairCallback callback_;
  ObservationData data_;
  bool have_prev_ = false;
  bool event_in_interval_ = false;
  Configuration prev_truth_;
  Configuration prev_obs_;
  std::size_t pairs_ = 0;
};

/// Integer m with delta = m * dt; throws PreconditionError otherwise.
std::size_t observation_stride(double delta, double dt);

/// Observations at times i*delta for every i with i*delta within the trajectory.
ObservationData observe(const Trajectory& trajectory, double delta);

/// Builds the truth record of one interval from its endpoint configurations (with ids).
SegmentRecord make_segment(std::size_t index, bool had_event, Configuration start, Configuration end);

}  // namespace bdikit
