#include "bdikit/bdi.hpp"

#include <algorithm>
#include <cmath>

#include "bdikit/errors.hpp"

namespace bdikit {

TrajectoryRecorder::TrajectoryRecorder(int dim, double dt, double horizon) {
  traj_.dim = dim;
  traj_.dt = dt;
  traj_.horizon = horizon;
}

bool TrajectoryRecorder::on_gridpoint(std::size_t index, double t, const Configuration& config) {
  traj_.records.push_back({t, TrajectoryRecord::Kind::grid, index, config});
  return true;
}

void TrajectoryRecorder::on_event(const EventLogEntry& event, const Configuration& after) {
  traj_.records.push_back({event.time, TrajectoryRecord::Kind::event, 0, after});
  traj_.events.push_back(event);
}

namespace {

Trajectory run_recorded(const model::ModelSpec& spec, const Configuration& init, double horizon, double dt,
                        Rng& rng, const SimulationOptions& options, bool immigration) {
  if (!(horizon > 0.0)) throw PreconditionError("horizon must be positive");
  if (!(dt > 0.0) || dt > horizon) throw PreconditionError("dt must be in (0, horizon]");
  EngineOptions eo;
  eo.dt = dt;
  eo.horizon = horizon;
  eo.immigration = immigration;
  eo.max_population = options.max_population;
  eo.max_events = options.max_events;
  TrajectoryRecorder rec(spec.dim, dt, horizon);
  run_engine(spec, init, eo, rng, rec);
  return rec.take();
}

}  // namespace

Trajectory simulate(const model::ModelSpec& spec, const Configuration& init, double horizon, double dt, Rng& rng,
                    const SimulationOptions& options) {
  return run_recorded(spec, init, horizon, dt, rng, options, true);
}

Trajectory simulate_branching_only(const model::ModelSpec& spec, const Configuration& ancestors, double horizon,
                                   double dt, Rng& rng, const SimulationOptions& options) {
  return run_recorded(spec, ancestors, horizon, dt, rng, options, false);
}

std::string count_power_name(int p) { return "ell^" + std::to_string(p); }

std::vector<Functional> count_power_functionals(int q) {
  if (q < 1) throw PreconditionError("count_power_functionals needs q >= 1");
  std::vector<Functional> out;
  for (int p = 1; p <= q; ++p) {
    out.push_back({count_power_name(p),
                   [p](const Configuration& x) { return std::pow(static_cast<double>(x.size()), p); }});
  }
  return out;
}

Functional void_indicator() {
  return {"void", [](const Configuration& x) { return x.empty() ? 1.0 : 0.0; }};
}

HistogramGrid HistogramGrid::uniform_1d(double lo, double hi, std::size_t bins) {
  return {{lo}, {hi}, {bins}};
}

std::size_t HistogramGrid::size() const {
  std::size_t n = 1;
  for (auto b : bins) n *= b;
  return n;
}

double HistogramGrid::bin_volume() const {
  double v = 1.0;
  for (std::size_t a = 0; a < dim(); ++a) v *= (hi[a] - lo[a]) / static_cast<double>(bins[a]);
  return v;
}

std::size_t HistogramGrid::index_of(ConstPoint x) const {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < dim(); ++a) {
    if (!(x[a] >= lo[a] && x[a] < hi[a])) return size();
    const double w = (hi[a] - lo[a]) / static_cast<double>(bins[a]);
    const auto i = std::min(bins[a] - 1, static_cast<std::size_t>((x[a] - lo[a]) / w));
    flat = flat * bins[a] + i;
  }
  return flat;
}

double HistogramGrid::center(std::size_t flat, std::size_t axis) const {
  std::size_t idx = 0;
  for (std::size_t a = dim(); a-- > 0;) {
    const std::size_t i = flat % bins[a];
    flat /= bins[a];
    if (a == axis) idx = i;
  }
  const double w = (hi[axis] - lo[axis]) / static_cast<double>(bins[axis]);
  return lo[axis] + (static_cast<double>(idx) + 0.5) * w;
}

void OccupationHistogram::add(const Configuration& config, double duration) {
  total_time += duration;
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < config.size(); ++i) {
    const std::size_t b = grid.index_of(config.at(i));
    if (b < n) mass[b] += duration;
  }
}

std::vector<double> OccupationHistogram::density() const {
  std::vector<double> out(mass.size(), 0.0);
  if (!(total_time > 0.0)) return out;
  const double scale = 1.0 / (total_time * grid.bin_volume());
  for (std::size_t i = 0; i < mass.size(); ++i) out[i] = mass[i] * scale;
  return out;
}

namespace {

void check_grid(const HistogramGrid& g, int dim) {
  if (g.dim() != static_cast<std::size_t>(dim) || g.hi.size() != g.dim() || g.bins.size() != g.dim()) {
    throw PreconditionError("histogram grid does not match the model dimension");
  }
  for (std::size_t a = 0; a < g.dim(); ++a) {
    if (!(g.hi[a] > g.lo[a]) || g.bins[a] == 0) throw PreconditionError("histogram bins must have positive volume");
  }
}

OccupationHistogram empty_histogram(const HistogramGrid& g) {
  OccupationHistogram h;
  h.grid = g;
  h.mass.assign(g.size(), 0.0);
  return h;
}

class CycleSink : public Sink {
 public:
  CycleSink(const std::vector<Functional>& fs, OccupationHistogram* hist)
      : fs_(fs), hist_(hist), acc_(fs.size(), 0.0) {}

  void reset() {
    std::fill(acc_.begin(), acc_.end(), 0.0);
    void_time_ = 0.0;
    if (hist_) {
      scratch_ = empty_histogram(hist_->grid);
    }
  }

  void on_segment(double t0, double t1, const Configuration& x) override {
    const double len = t1 - t0;
    if (len <= 0.0) return;
    if (x.empty()) void_time_ += len;
    for (std::size_t i = 0; i < fs_.size(); ++i) acc_[i] += fs_[i].f(x) * len;
    if (hist_) scratch_.add(x, len);
  }

  void commit(ExcursionStats& s, double length) {
    ++s.cycle_count;
    s.total_time += length;
    s.time_at_void += void_time_;
    s.cycle_lengths.push_back(length);
    s.cycle_void_times.push_back(void_time_);
    for (std::size_t i = 0; i < fs_.size(); ++i) {
      s.integrals[i] += acc_[i];
      s.cycle_integrals[i].push_back(acc_[i]);
    }
    if (hist_) {
      for (std::size_t b = 0; b < scratch_.mass.size(); ++b) hist_->mass[b] += scratch_.mass[b];
      hist_->total_time += length;
    }
  }

 private:
  const std::vector<Functional>& fs_;
  OccupationHistogram* hist_;
  OccupationHistogram scratch_;
  std::vector<double> acc_;
  double void_time_ = 0.0;
};

}  // namespace

std::size_t ExcursionStats::index_of(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw PreconditionError("functional '" + name + "' was not accumulated");
  return static_cast<std::size_t>(it - names.begin());
}

ExcursionStats run_regenerative(const model::ModelSpec& spec, std::size_t n_cycles, double dt,
                                const std::vector<Functional>& functionals, Rng& rng,
                                const RegenerativeOptions& options) {
  if (n_cycles < 1) throw PreconditionError("run_regenerative needs n_cycles >= 1");
  if (!(dt > 0.0)) throw PreconditionError("dt must be positive");
  if (!(spec.immigration_rate > 0.0)) throw PreconditionError("regenerative runs need a positive immigration rate");
  if (!(options.time_cap > 0.0)) throw PreconditionError("time_cap must be positive");

  ExcursionStats s;
  for (const auto& f : functionals) s.names.push_back(f.name);
  s.integrals.assign(functionals.size(), 0.0);
  s.cycle_integrals.assign(functionals.size(), {});
  if (options.histogram) {
    check_grid(*options.histogram, spec.dim);
    s.histogram = empty_histogram(*options.histogram);
  }

  EngineOptions eo;
  eo.dt = dt;
  eo.horizon = options.time_cap;
  eo.stop_at_void = true;
  eo.max_population = options.max_population;
  eo.max_events = options.max_events;
  CycleSink sink(functionals, s.histogram ? &*s.histogram : nullptr);
  const Configuration start(spec.dim);
  std::uint64_t next_id = 0;
  for (std::size_t c = 0; c < n_cycles; ++c) {
    sink.reset();
    const RunResult r = run_engine(spec, start, eo, rng, sink, next_id);
    next_id = r.next_id;
    if (r.status == RunResult::Status::void_reached) {
      sink.commit(s, r.end_time);
    } else {
      ++s.abandoned_cycles;
    }
  }
  return s;
}

stats::Estimate functional_mean(const ExcursionStats& s, const std::string& name) {
  const std::size_t i = s.index_of(name);
  return stats::ratio_bootstrap(s.cycle_integrals[i], s.cycle_lengths);
}

stats::Estimate void_fraction(const ExcursionStats& s) {
  return stats::ratio_bootstrap(s.cycle_void_times, s.cycle_lengths);
}

std::vector<double> occupation_histogram(const ExcursionStats& s) {
  if (!s.histogram) throw PreconditionError("the regenerative run did not accumulate a histogram");
  return s.histogram->density();
}

OccupationHistogram occupation_histogram(const Trajectory& traj, const HistogramGrid& grid) {
  check_grid(grid, traj.dim);
  OccupationHistogram h = empty_histogram(grid);
  for (std::size_t i = 0; i + 1 < traj.records.size(); ++i) {
    h.add(traj.records[i].config, traj.records[i + 1].time - traj.records[i].time);
  }
  return h;
}

std::vector<stats::Estimate> particle_count_moments(const ExcursionStats& s, int q) {
  if (q < 1) throw PreconditionError("particle_count_moments needs q >= 1");
  std::vector<stats::Estimate> out;
  for (int p = 1; p <= q; ++p) out.push_back(functional_mean(s, count_power_name(p)));
  return out;
}

}  // namespace bdikit
