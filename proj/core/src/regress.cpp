#include "bdikit/regress.hpp"

#include <algorithm>
#include <cmath>

#include "bdikit/engine.hpp"
#include "bdikit/errors.hpp"
#include "bdikit/presets.hpp"
#include "bdikit/reconstruct.hpp"
#include "bdikit/stats.hpp"

namespace bdikit {

std::vector<std::size_t> RegressionScheme::unfilled() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!entries[i].filled) out.push_back(i);
  }
  return out;
}

SchemeFiller::SchemeFiller(const CellPartition& cells, double delta, double lambda) {
  if (!(delta > 0.0)) throw PreconditionError("delta must be positive");
  scheme_.cells = cells;
  scheme_.delta = delta;
  scheme_.lambda = lambda;
  scheme_.entries.resize(cells.cell_count());
}

void SchemeFiller::add_pair(const Configuration& x, const Configuration& y, const SegmentRecord* truth) {
  const std::size_t i = next_index_++;
  if (x.empty() || x.dim != static_cast<int>(scheme_.cells.dim())) return;
  // cheap pre-check: no unfilled cell holds a particle of x
  bool wanted = false;
  for (std::size_t m = 0; m < x.size() && !wanted; ++m) {
    const auto cell = scheme_.cells.cell_of(x.at(m));
    wanted = cell && !scheme_.entries[*cell].filled;
  }
  if (!wanted) return;
  const MatchResult match = match_pair(x, y, scheme_.delta, scheme_.lambda);
  if (!match.identified()) return;
  const bool good = truth ? truth->ci_flag(scheme_.delta, scheme_.lambda) : true;
  const auto d = static_cast<std::size_t>(x.dim);
  const double scale = 1.0 / std::sqrt(scheme_.delta);
  for (std::size_t m = 0; m < x.size(); ++m) {
    const auto cell = scheme_.cells.cell_of(x.at(m));
    if (!cell) continue;
    SchemeEntry& e = scheme_.entries[*cell];
    if (e.filled) continue;
    e.filled = true;
    e.tau = i;
    e.particle = m;
    e.x.assign(x.at(m).begin(), x.at(m).end());
    e.z.resize(d);
    for (std::size_t c = 0; c < d; ++c) e.z[c] = (y.coord(match.permutation[m], c) - x.coord(m, c)) * scale;
    e.good = good;
    ++scheme_.filled_count;
    scheme_.tau_star = std::max(scheme_.tau_star, i);
  }
}

bool SchemeFiller::window_filled(double lo, double hi) const {
  const auto& cells = scheme_.cells;
  if (cells.dim() != 1) throw PreconditionError("window_filled is defined for d = 1");
  const double w = cells.cell_edge();
  const double base = cells.cube.lo[0];
  for (std::size_t c = 0; c < cells.n; ++c) {
    const double clo = base + static_cast<double>(c) * w;
    if (clo + w <= lo || clo >= hi) continue;
    if (!scheme_.entries[c].filled) return false;
  }
  return true;
}

RegressionScheme fill_scheme(const std::vector<Configuration>& observations, const std::vector<SegmentRecord>& truth,
                             const CellPartition& cells, double delta, double lambda) {
  if (!truth.empty() && observations.size() != truth.size() + 1) {
    throw PreconditionError("truth must have one record per observation pair");
  }
  SchemeFiller filler(cells, delta, lambda);
  for (std::size_t i = 0; i + 1 < observations.size(); ++i) {
    filler.add_pair(observations[i], observations[i + 1], truth.empty() ? nullptr : &truth[i]);
  }
  return filler.take();
}

double bandwidth(std::size_t n, double beta) {
  if (n < 1) throw PreconditionError("bandwidth needs n >= 1");
  return std::pow(static_cast<double>(n), -1.0 / (2.0 * beta + 1.0));
}

double kernel_sum(const RegressionScheme& scheme, const Kernel& kernel, double h, double a,
                  const std::vector<double>& weights) {
  if (weights.size() != scheme.entries.size()) throw PreconditionError("one weight per cell is required");
  const double len = scheme.cells.cell_edge();
  double s = 0.0;
  for (std::size_t c = 0; c < scheme.entries.size(); ++c) {
    const auto& e = scheme.entries[c];
    if (!e.filled) continue;
    s += len * weights[c] * kernel.scaled(e.x[0] - a, h);
  }
  return s;
}

double estimate_sigma2(const RegressionScheme& scheme, const Kernel& kernel, double beta, double a) {
  const auto& cells = scheme.cells;
  if (cells.dim() != 1) throw PreconditionError("estimate_sigma2 is defined for d = 1");
  if (kernel.order != kernel_order_for(beta)) {
    throw PreconditionError("kernel order must be the largest integer below beta");
  }
  const double lo = cells.cube.lo[0];
  const double hi = lo + cells.cube.edge;
  if (!(a > lo && a < hi)) throw PreconditionError("a must lie in the interior of the cube");
  const double h = bandwidth(cells.n, beta);
  if (a - h < lo || a + h > hi) throw PreconditionError("kernel support window around a leaves the cube");
  const double w = cells.cell_edge();
  for (std::size_t c = 0; c < cells.n; ++c) {
    const double clo = lo + static_cast<double>(c) * w;
    if (clo + w <= a - h || clo >= a + h) continue;
    if (!scheme.entries[c].filled) throw PreconditionError("unfilled cell inside the kernel support window");
  }
  std::vector<double> z2(scheme.entries.size(), 0.0);
  for (std::size_t c = 0; c < z2.size(); ++c) {
    if (scheme.entries[c].filled) z2[c] = scheme.entries[c].z[0] * scheme.entries[c].z[0];
  }
  return kernel_sum(scheme, kernel, h, a, z2);
}

namespace {

// Forwards gridpoints after a burn-in, with index and time shifted to start at 0.
class ShiftedSink : public Sink {
 public:
  ShiftedSink(Sink& inner, std::size_t offset, double t_offset) : inner_(inner), offset_(offset), t_offset_(t_offset) {}
  bool on_gridpoint(std::size_t index, double t, const Configuration& c) override {
    if (index < offset_) return true;
    return inner_.on_gridpoint(index - offset_, t - t_offset_, c);
  }
  void on_event(const EventLogEntry& e, const Configuration& after) override {
    if (started_ || e.time > t_offset_) {
      started_ = true;
      inner_.on_event(e, after);
    }
  }

 private:
  Sink& inner_;
  std::size_t offset_;
  double t_offset_;
  bool started_ = false;
};

}  // namespace

std::optional<EstimateReport> estimate_once(const model::ModelSpec& spec, const Box& cube, double a, double beta,
                                            double lambda, double delta, double dt_ratio, Rng& rng,
                                            const SweepOptions& options) {
  if (spec.dim != 1) throw PreconditionError("estimation is defined for d = 1");
  if (!(lambda >= critical_lambda(beta) && lambda < 0.5)) {
    throw PreconditionError("lambda must satisfy critical_lambda(beta) <= lambda < 1/2");
  }
  if (!(dt_ratio >= 1.0)) throw PreconditionError("dt_ratio must be >= 1");
  const CellPartition cells = partition(cube, delta, 1);
  const double h = bandwidth(cells.n, beta);
  const Kernel kernel = make_kernel(kernel_order_for(beta));
  if (!(a - h >= cube.lo[0] && a + h <= cube.lo[0] + cube.edge)) {
    throw PreconditionError("kernel support window around a leaves the cube");
  }

  const double dt = delta / std::round(dt_ratio);
  const std::size_t stride = observation_stride(delta, dt);
  const auto burn_steps =
      static_cast<std::size_t>(std::ceil(options.burn_in / delta)) * stride;
  const double t_offset = static_cast<double>(burn_steps) * dt;

  SchemeFiller filler(cells, delta, lambda);
  std::size_t last_filled = 0;
  bool done = false;
  ObservationCollector col(delta, dt, false);
  col.set_pair_callback([&](const Configuration& x, const Configuration& y, const SegmentRecord& seg) {
    filler.add_pair(x, y, &seg);
    if (filler.scheme().filled_count != last_filled) {
      last_filled = filler.scheme().filled_count;
      done = filler.window_filled(a - h, a + h);
    }
    return !done;
  });
  ShiftedSink sink(col, burn_steps, t_offset);
  EngineOptions eo;
  eo.dt = dt;
  eo.horizon = t_offset + options.max_time;
  eo.max_population = options.max_population;
  eo.max_events = options.max_events;
  run_engine(spec, Configuration(1), eo, rng, sink);
  if (!done) return std::nullopt;

  EstimateReport r;
  r.a = a;
  r.estimate = estimate_sigma2(filler.scheme(), kernel, beta, a);
  const double point[1] = {a};
  r.truth = model::sigma2_at(spec, point);
  r.delta = delta;
  r.n = cells.n;
  r.h = h;
  r.beta = beta;
  r.lambda = lambda;
  r.squared_error = (r.estimate - *r.truth) * (r.estimate - *r.truth);
  r.rescaled_error = std::pow(static_cast<double>(cells.n), 2.0 * beta / (2.0 * beta + 1.0)) * r.squared_error;
  r.fill_time = static_cast<double>(col.pair_count()) * delta;
  const double w = cells.cell_edge();
  for (std::size_t c = 0; c < cells.n; ++c) {
    const double clo = cube.lo[0] + static_cast<double>(c) * w;
    if (clo + w <= a - h || clo >= a + h) continue;
    if (!filler.scheme().entries[c].good) r.had_bad_entry = true;
  }
  return r;
}

std::vector<SweepRow> risk_sweep(const model::ModelSpec& spec, const Box& cube, double a, double beta,
                                 double lambda, const std::vector<double>& delta_list, std::size_t replicates,
                                 double dt_ratio, Rng& rng, const SweepOptions& options) {
  if (replicates < 1) throw PreconditionError("risk_sweep needs replicates >= 1");
  if (!(lambda >= critical_lambda(beta) && lambda < 0.5)) {
    throw PreconditionError("lambda must satisfy critical_lambda(beta) <= lambda < 1/2");
  }
  const std::uint64_t master = rng();
  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k < delta_list.size(); ++k) {
    const double delta = delta_list[k];
    SweepRow row;
    row.delta = delta;
    row.n = partition(cube, delta, 1).n;
    row.h = bandwidth(row.n, beta);
    row.lambda = lambda;
    row.beta = beta;
    std::vector<double> se;
    std::size_t bad = 0;
    double sum_est = 0.0;
    for (std::size_t r = 0; r < replicates; ++r) {
      Rng rep = make_rng(master, k * replicates + r);
      std::optional<EstimateReport> rep_out;
      try {
        rep_out = estimate_once(spec, cube, a, beta, lambda, delta, dt_ratio, rep, options);
      } catch (const ExplosionError&) {
        rep_out.reset();
      }
      if (!rep_out) {
        ++row.dropped;
        continue;
      }
      se.push_back(rep_out->squared_error);
      sum_est += rep_out->estimate;
      if (rep_out->had_bad_entry) ++bad;
      row.reports.push_back(std::move(*rep_out));
    }
    row.replicates = row.reports.size();
    if (row.replicates > 0) {
      double s = 0.0;
      for (double v : se) s += v;
      row.mse = s / static_cast<double>(se.size());
      row.mse_se = se.size() > 1 ? stats::mean_estimate(se).std_error : 0.0;
      row.rescaled_mse = std::pow(static_cast<double>(row.n), 2.0 * beta / (2.0 * beta + 1.0)) * row.mse;
      row.f_event_frequency = static_cast<double>(bad) / static_cast<double>(row.replicates);
      row.mean_estimate = sum_est / static_cast<double>(row.replicates);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace bdikit
