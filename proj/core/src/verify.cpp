#include "bdikit/verify.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "bdikit/bdi.hpp"
#include "bdikit/engine.hpp"
#include "bdikit/errors.hpp"
#include "bdikit/sde.hpp"
#include "bdikit/stats.hpp"

namespace bdikit::verify {

OracleReport make_report(std::string quantity, double analytic, double simulated, double std_error) {
  OracleReport r;
  r.quantity = std::move(quantity);
  r.analytic = analytic;
  r.simulated = simulated;
  r.std_error = std_error;
  const double diff = std::abs(analytic - simulated);
  r.z_score = std_error > 0.0 ? diff / std_error : (diff <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity());
  r.pass = diff <= 3.0 * std_error + (std_error > 0.0 ? 0.0 : 1e-12);
  return r;
}

std::pair<double, double> mm_infinity_moments(double c, double kappa) {
  if (!(c > 0.0) || !(kappa > 0.0)) throw PreconditionError("mm_infinity_moments needs c, kappa > 0");
  const double m = c / kappa;
  return {m, m + m * m};
}

double pure_death_occupation_density(double c, double kappa, double z) {
  const double s = std::sqrt(2.0 * kappa);
  return c * std::exp(-s * std::abs(z)) / s;
}

namespace {

class CountAtEnd : public Sink {
 public:
  bool on_gridpoint(std::size_t, double, const Configuration& c) override {
    count = c.size();
    return true;
  }
  std::size_t count = 0;
};

}  // namespace

std::vector<OracleReport> expectation_semigroup_compare(const model::ModelSpec& spec, model::ConstPoint y, double t,
                                                        double dt, std::size_t n_direct, std::size_t n_fk, Rng& rng,
                                                        bool constant_rates) {
  if (n_direct < 2 || n_fk < 2) throw PreconditionError("need at least two paths per method");
  if (!(t > 0.0) || !(dt > 0.0)) throw PreconditionError("t and dt must be positive");
  Configuration init(spec.dim);
  init.push_back(y, 0);
  EngineOptions eo;
  eo.dt = std::min(dt, t);
  eo.horizon = t;
  eo.immigration = false;

  Rng direct_rng = split(rng);
  Rng fk_rng = split(rng);
  std::vector<double> counts(n_direct);
  for (std::size_t i = 0; i < n_direct; ++i) {
    CountAtEnd sink;
    run_engine(spec, init, eo, direct_rng, sink);
    counts[i] = static_cast<double>(sink.count);
  }
  const stats::Estimate direct = stats::mean_estimate(counts);
  const sde::MonteCarloEstimate fk = sde::feynman_kac_survival(spec, y, t, eo.dt, n_fk, fk_rng);

  std::vector<OracleReport> out;
  const double combined = std::sqrt(direct.std_error * direct.std_error + fk.std_error * fk.std_error);
  out.push_back(make_report("direct_vs_feynman_kac", fk.estimate, direct.estimate, combined));
  if (constant_rates) {
    const double kappa = spec.kill_rate(y);
    const double exact = std::exp(-kappa * (1.0 - model::rho(spec, y)) * t);
    out.push_back(make_report("direct_vs_exact", exact, direct.estimate, direct.std_error));
    out.push_back(make_report("feynman_kac_vs_exact", exact, fk.estimate, fk.std_error));
  }
  return out;
}

namespace {

// Integral over [0, T] of u, where u' = -a u + f e^{-2 a t}, u(0) = 1, by RK4
// with step halving until the integral settles; returns (integral, u(T)).
std::pair<double, double> integrate_second_moment(double a, double f, double horizon) {
  auto rhs = [a, f](double t, const std::array<double, 2>& s) {
    return std::array<double, 2>{-a * s[0] + f * std::exp(-2.0 * a * t), s[0]};
  };
  auto solve = [&](std::size_t steps) {
    const double h = horizon / static_cast<double>(steps);
    std::array<double, 2> s{1.0, 0.0};
    for (std::size_t i = 0; i < steps; ++i) {
      const double t = static_cast<double>(i) * h;
      const auto k1 = rhs(t, s);
      const auto k2 = rhs(t + h / 2, {s[0] + h / 2 * k1[0], s[1] + h / 2 * k1[1]});
      const auto k3 = rhs(t + h / 2, {s[0] + h / 2 * k2[0], s[1] + h / 2 * k2[1]});
      const auto k4 = rhs(t + h, {s[0] + h * k3[0], s[1] + h * k3[1]});
      for (int j = 0; j < 2; ++j) s[j] += h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    }
    return std::make_pair(s[1], s[0]);
  };
  std::size_t steps = 256;
  auto prev = solve(steps);
  for (int iter = 0; iter < 16; ++iter) {
    steps *= 2;
    auto cur = solve(steps);
    if (std::abs(cur.first - prev.first) <= 1e-13 * std::max(1.0, std::abs(cur.first))) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace

double moment_formula(double c, double kappa, double rho, int q, double m2) {
  if (!(c >= 0.0) || !(kappa > 0.0)) throw PreconditionError("moment_formula needs c >= 0 and kappa > 0");
  if (!(rho < 1.0)) throw PreconditionError("moment_formula needs rho < 1 (subcritical)");
  if (q != 1 && q != 2) throw PreconditionError("moment_formula supports q = 1 and q = 2");
  const double a = kappa * (1.0 - rho);
  const double i1 = 1.0 / a;
  if (q == 1) return c * i1;
  const double horizon = 40.0 / a;
  const auto [head, u_end] = integrate_second_moment(a, kappa * (m2 - rho), horizon);
  // beyond the horizon u decays like u(T) e^{-a(t-T)}; the forcing is e^{-80} smaller
  const double i2 = head + u_end / a;
  return c * i2 + c * c * i1 * i1;
}

}  // namespace bdikit::verify
