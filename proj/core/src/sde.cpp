#include "bdikit/sde.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "bdikit/errors.hpp"

namespace bdikit::sde {

void EulerStep::begin(const ModelSpec& spec, ConstPoint x0, double h, Rng& motion) {
  d_ = x0.size();
  h_ = h;
  s_ = 0.0;
  x0_.assign(x0.begin(), x0.end());
  b_.resize(d_);
  sig_.resize(d_ * d_);
  g_.resize(d_);
  w_.assign(d_, 0.0);
  tmp_.resize(d_);
  spec.drift(x0, b_);
  spec.volatility(x0, sig_);
  const double sd = std::sqrt(h);
  for (auto& g : g_) g = sd * standard_normal(motion);
}

void EulerStep::position_at(double u, Rng& bridge, MutPoint out) {
  u = std::clamp(u, s_, h_);
  const double rest = h_ - s_;
  if (u > s_ && rest > 0.0) {
    const double frac = (u - s_) / rest;
    const double sd = std::sqrt((u - s_) * (h_ - u) / rest);
    for (std::size_t i = 0; i < d_; ++i) {
      w_[i] += frac * (g_[i] - w_[i]) + sd * standard_normal(bridge);
    }
    s_ = u;
  }
  for (std::size_t i = 0; i < d_; ++i) {
    double acc = x0_[i] + b_[i] * s_;
    for (std::size_t j = 0; j < d_; ++j) acc += sig_[i * d_ + j] * w_[j];
    out[i] = acc;
  }
}

void EulerStep::end(MutPoint out) const {
  for (std::size_t i = 0; i < d_; ++i) {
    double acc = x0_[i] + b_[i] * h_;
    for (std::size_t j = 0; j < d_; ++j) acc += sig_[i * d_ + j] * g_[j];
    out[i] = acc;
  }
}

std::vector<double> time_grid(double horizon, double dt) {
  if (!(horizon > 0.0) || !(dt > 0.0)) throw PreconditionError("time grid needs horizon > 0 and dt > 0");
  if (dt > horizon * (1.0 + 1e-12)) throw PreconditionError("dt must not exceed the horizon");
  std::vector<double> grid{0.0};
  const auto full = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
  for (std::size_t k = 1; k <= full; ++k) grid.push_back(std::min(static_cast<double>(k) * dt, horizon));
  if (horizon - grid.back() > 1e-12 * horizon) grid.push_back(horizon);
  grid.back() = horizon;
  return grid;
}

namespace {

bool all_finite(ConstPoint x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

enum class Outcome { reject, kill, jump };

struct DriveResult {
  PathSample path;
  bool killed = false;
  double kill_time = 0.0;
};

// Piece [t0, t1] of the path: value at t0 (after any jump) and left limit at t1.
using SegmentFn = std::function<void(double t0, ConstPoint x0, double t1, ConstPoint x1)>;
// Decide the fate of a proposal at position x; for jumps, write the new position.
using DecideFn = std::function<Outcome(ConstPoint x, Rng& events, MutPoint jump_to)>;

DriveResult drive(const ModelSpec& spec, ConstPoint y0, double horizon, double dt, Rng& rng,
                  double proposal_rate, const DecideFn& decide, const SegmentFn& on_segment) {
  if (static_cast<int>(y0.size()) != spec.dim) throw PreconditionError("start point has wrong dimension");
  if (!all_finite(y0)) throw PreconditionError("start point must be finite");
  const auto grid = time_grid(horizon, dt);
  // Two child streams so that the motion stream is untouched by the event clock.
  Rng motion = split(rng);
  Rng events = split(rng);

  const auto d = static_cast<std::size_t>(spec.dim);
  DriveResult res;
  res.path.dim = spec.dim;
  res.path.step = dt;
  res.path.times.reserve(grid.size());
  res.path.positions.reserve(grid.size() * d);
  res.path.times.push_back(0.0);
  res.path.positions.insert(res.path.positions.end(), y0.begin(), y0.end());

  std::vector<double> x(y0.begin(), y0.end());
  std::vector<double> probe(d), next(d), jump_to(d);
  EulerStep step;
  double next_proposal =
      proposal_rate > 0.0 ? exponential(events, proposal_rate) : std::numeric_limits<double>::infinity();

  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    double t_start = grid[k];
    const double t_end = grid[k + 1];
    step.begin(spec, x, t_end - t_start, motion);
    while (next_proposal < t_end) {
      step.position_at(next_proposal - t_start, events, probe);
      const Outcome outcome = decide(probe, events, jump_to);
      if (outcome == Outcome::reject) {
        next_proposal += exponential(events, proposal_rate);
        continue;
      }
      if (on_segment) on_segment(t_start, x, next_proposal, probe);
      if (outcome == Outcome::kill) {
        res.killed = true;
        res.kill_time = next_proposal;
        res.path.times.push_back(next_proposal);
        res.path.positions.insert(res.path.positions.end(), probe.begin(), probe.end());
        return res;
      }
      if (!all_finite(jump_to)) throw NumericalError("non-finite jump target", k);
      x = jump_to;
      t_start = next_proposal;
      res.path.times.push_back(t_start);
      res.path.positions.insert(res.path.positions.end(), x.begin(), x.end());
      next_proposal += exponential(events, proposal_rate);
      if (t_end > t_start) step.begin(spec, x, t_end - t_start, motion);
    }
    if (t_end > t_start) {
      step.end(next);
      if (!all_finite(next)) throw NumericalError("non-finite position", k + 1);
      if (on_segment) on_segment(t_start, x, t_end, next);
      x = next;
      res.path.times.push_back(t_end);
      res.path.positions.insert(res.path.positions.end(), x.begin(), x.end());
    }
  }
  return res;
}

DecideFn aux_decider(const ModelSpec& spec, double bound) {
  return [&spec, bound](ConstPoint x, Rng& events, MutPoint jump_to) {
    const auto probs = model::offspring_at(spec, x);
    double r = 0.0;
    for (std::size_t k = 1; k < probs.size(); ++k) r += static_cast<double>(k) * probs[k];
    const double rate = spec.kill_rate(x) * r;
    if (rate > bound * (1.0 + 1e-12)) throw PreconditionError("kappa*rho exceeds declared bounds");
    if (!(uniform01(events) * bound < rate)) return Outcome::reject;
    const int k = model::sample_size_biased_count(probs, events);
    const auto d = x.size();
    std::vector<double> offsets(static_cast<std::size_t>(k) * d);
    spec.scatter(x, k, events, offsets);
    const auto j = static_cast<std::size_t>(std::min<double>(k - 1, std::floor(uniform01(events) * k)));
    for (std::size_t i = 0; i < d; ++i) jump_to[i] = x[i] + offsets[j * d + i];
    return Outcome::jump;
  };
}

}  // namespace

PathSample integrate_diffusion(const ModelSpec& spec, ConstPoint y0, double horizon, double dt, Rng& rng) {
  return drive(spec, y0, horizon, dt, rng, 0.0, {}, {}).path;
}

std::pair<PathSample, KilledOutcome> sample_killed_motion(const ModelSpec& spec, ConstPoint y0,
                                                          double horizon, double dt, Rng& rng) {
  const double bound = spec.kill_rate_bound;
  DecideFn decide = [&spec, bound](ConstPoint x, Rng& events, MutPoint) {
    const double kappa = spec.kill_rate(x);
    if (kappa > bound * (1.0 + 1e-12)) throw PreconditionError("kill rate exceeds kill_rate_bound");
    return uniform01(events) * bound < kappa ? Outcome::kill : Outcome::reject;
  };
  auto res = drive(spec, y0, horizon, dt, rng, bound, decide, {});
  KilledOutcome outcome;
  outcome.status = res.killed ? KilledOutcome::Status::killed : KilledOutcome::Status::survived;
  outcome.terminal_time = res.killed ? res.kill_time : horizon;
  const auto end = res.path.endpoint();
  outcome.terminal_position.assign(end.begin(), end.end());
  return {std::move(res.path), std::move(outcome)};
}

PathSample sample_aux_jump_diffusion(const ModelSpec& spec, ConstPoint y0, double horizon, double dt,
                                     Rng& rng) {
  const double bound = spec.kill_rate_bound * spec.rho_bound;
  return drive(spec, y0, horizon, dt, rng, bound, aux_decider(spec, bound), {}).path;
}

MonteCarloEstimate feynman_kac_survival(const ModelSpec& spec, ConstPoint y0, double t, double dt,
                                        std::size_t n_paths, Rng& rng) {
  if (n_paths < 2) throw PreconditionError("feynman_kac_survival needs n_paths >= 2");
  const double bound = spec.kill_rate_bound * spec.rho_bound;
  const auto decide = aux_decider(spec, bound);
  auto potential = [&spec](ConstPoint x) { return spec.kill_rate(x) * (1.0 - model::rho(spec, x)); };

  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t p = 0; p < n_paths; ++p) {
    double exponent = 0.0;
    SegmentFn seg = [&](double t0, ConstPoint x0, double t1, ConstPoint x1) {
      exponent += 0.5 * (potential(x0) + potential(x1)) * (t1 - t0);
    };
    drive(spec, y0, t, dt, rng, bound, decide, seg);
    const double w = std::exp(-exponent);
    const double delta = w - mean;
    mean += delta / static_cast<double>(p + 1);
    m2 += delta * (w - mean);
  }
  const double var = m2 / static_cast<double>(n_paths - 1);
  return {mean, std::sqrt(std::max(0.0, var) / static_cast<double>(n_paths))};
}

}  // namespace bdikit::sde
