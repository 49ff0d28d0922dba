#include "bdikit/observe.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "bdikit/errors.hpp"

namespace bdikit {

bool SegmentRecord::ci_flag(double delta, double lambda) const {
  if (had_event || start_config.empty()) return false;
  const double r = std::pow(delta, lambda);
  if (!is_wellspread(start_config, 4.0 * r)) return false;
  return std::all_of(increments.begin(), increments.end(), [r](double v) { return std::abs(v) < r; });
}

SegmentRecord make_segment(std::size_t index, bool had_event, Configuration start, Configuration end) {
  SegmentRecord s;
  s.interval_index = index;
  s.had_event = had_event;
  s.start_config = canonical(start, true);
  s.end_config = canonical(end, true);
  if (had_event) return s;
  if (s.start_config.size() != s.end_config.size() || s.start_config.ids.size() != s.start_config.size() ||
      s.end_config.ids.size() != s.end_config.size()) {
    throw PreconditionError("event-free segment needs identical id sets at both ends");
  }
  const auto d = static_cast<std::size_t>(s.start_config.dim);
  std::unordered_map<std::uint64_t, std::size_t> where;
  for (std::size_t i = 0; i < s.end_config.size(); ++i) where.emplace(s.end_config.ids[i], i);
  s.increments.resize(s.start_config.positions.size());
  for (std::size_t k = 0; k < s.start_config.size(); ++k) {
    const auto it = where.find(s.start_config.ids[k]);
    if (it == where.end()) throw PreconditionError("event-free segment needs identical id sets at both ends");
    for (std::size_t m = 0; m < d; ++m) {
      s.increments[k * d + m] = s.end_config.coord(it->second, m) - s.start_config.coord(k, m);
    }
  }
  return s;
}

std::size_t observation_stride(double delta, double dt) {
  if (!(delta > 0.0) || !(dt > 0.0)) throw PreconditionError("delta and dt must be positive");
  const double ratio = delta / dt;
  const double m = std::round(ratio);
  if (m < 1.0 || std::abs(ratio - m) > 1e-9 * m) {
    throw PreconditionError("delta must be an integer multiple of dt");
  }
  return static_cast<std::size_t>(m);
}

ObservationCollector::ObservationCollector(double delta, double dt, bool store)
    : stride_(observation_stride(delta, dt)), store_(store) {
  data_.delta = delta;
}

bool ObservationCollector::on_gridpoint(std::size_t index, double t, const Configuration& config) {
  if (index % stride_ != 0) return true;
  // a final partial step is not on the observation lattice
  const double expected = static_cast<double>(index / stride_) * data_.delta;
  if (std::abs(t - expected) > 1e-9 * std::max(1.0, expected)) return true;

  Configuration truth = canonical(config, true);
  Configuration obs(truth.dim);
  obs.positions = truth.positions;
  bool keep_going = true;
  if (have_prev_) {
    SegmentRecord seg = make_segment(pairs_, event_in_interval_, prev_truth_, truth);
    if (callback_) keep_going = callback_(prev_obs_, obs, seg);
    if (store_) data_.truth.push_back(std::move(seg));
    ++pairs_;
  }
  if (store_) data_.observations.push_back(obs);
  prev_truth_ = std::move(truth);
  prev_obs_ = std::move(obs);
  have_prev_ = true;
  event_in_interval_ = false;
  return keep_going;
}

void ObservationCollector::on_event(const EventLogEntry&, const Configuration&) { event_in_interval_ = true; }

ObservationData observe(const Trajectory& traj, double delta) {
  ObservationCollector col(delta, traj.dt);
  if (traj.records.empty()) return col.take();
  for (const auto& r : traj.records) {
    if (r.kind == TrajectoryRecord::Kind::grid) {
      col.on_gridpoint(r.grid_index, r.time, r.config);
    } else {
      col.on_event(EventLogEntry{}, r.config);
    }
  }
  return col.take();
}

}  // namespace bdikit
