#include "bdikit/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bdikit/errors.hpp"

namespace bdikit::model {

std::vector<double> offspring_at(const ModelSpec& spec, ConstPoint y) {
  std::vector<double> probs(static_cast<std::size_t>(spec.max_offspring) + 1, 0.0);
  spec.offspring(y, probs);
  return probs;
}

double rho(const ModelSpec& spec, ConstPoint y) {
  const auto probs = offspring_at(spec, y);
  double sum = 0.0;
  for (std::size_t k = 1; k < probs.size(); ++k) sum += static_cast<double>(k) * probs[k];
  return sum;
}

double moment_mq(const ModelSpec& spec, ConstPoint y, int q) {
  if (q < 1) throw PreconditionError("moment_mq: q must be >= 1");
  const auto probs = offspring_at(spec, y);
  double sum = 0.0;
  for (std::size_t k = 1; k < probs.size(); ++k) {
    sum += std::pow(static_cast<double>(k), q) * probs[k];
  }
  return sum;
}

int sample_offspring_count(std::span<const double> probs, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    acc += probs[k];
    if (u < acc) return static_cast<int>(k);
  }
  // u landed in the rounding gap above the last partial sum
  for (std::size_t k = probs.size(); k-- > 0;) {
    if (probs[k] > 0.0) return static_cast<int>(k);
  }
  return 0;
}

int sample_size_biased_count(std::span<const double> probs, Rng& rng) {
  double total = 0.0;
  for (std::size_t k = 1; k < probs.size(); ++k) total += static_cast<double>(k) * probs[k];
  if (!(total > 0.0)) throw PreconditionError("size-biased offspring law needs rho > 0");
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  int last = 1;
  for (std::size_t k = 1; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    acc += static_cast<double>(k) * probs[k];
    last = static_cast<int>(k);
    if (u < acc) return last;
  }
  return last;
}

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kill_rate_nonpositive: return "kill_rate_nonpositive";
    case Violation::Kind::kill_rate_exceeds_bound: return "kill_rate_exceeds_bound";
    case Violation::Kind::rho_exceeds_bound: return "rho_exceeds_bound";
    case Violation::Kind::normalization: return "normalization";
  }
  return "unknown";
}

namespace {

void check_structure(const ModelSpec& spec) {
  if (spec.dim < 1) throw ValidationError("dim must be positive");
  if (!spec.drift || !spec.volatility || !spec.kill_rate || !spec.offspring || !spec.scatter ||
      !spec.immigration_law || !spec.fallback_law) {
    throw ValidationError("model '" + spec.name + "' is missing a callback");
  }
  if (!(spec.kill_rate_bound > 0.0)) throw ValidationError("kill_rate_bound must be positive");
  if (!(spec.rho_bound >= 0.0)) throw ValidationError("rho_bound must be nonnegative");
  if (!(spec.immigration_rate >= 0.0)) throw ValidationError("immigration_rate must be nonnegative");
  if (spec.max_offspring < 0) throw ValidationError("max_offspring must be nonnegative");
  if (!(spec.lipschitz_hint > 0.0)) throw ValidationError("lipschitz_hint must be positive");
}

}  // namespace

ValidationReport validate_spec(const ModelSpec& spec, std::size_t sample_budget, Rng& rng) {
  if (sample_budget < 1) throw PreconditionError("validate_spec: sample_budget must be >= 1");
  check_structure(spec);

  ValidationReport report;
  report.min_net_death_rate = std::numeric_limits<double>::infinity();
  const auto d = static_cast<std::size_t>(spec.dim);
  std::vector<double> y(d, 0.0);
  std::vector<double> probs(static_cast<std::size_t>(spec.max_offspring) + 1);

  for (std::size_t s = 0; s < sample_budget; ++s) {
    if (s == 0) {
      std::fill(y.begin(), y.end(), 0.0);
    } else if (s % 2 == 1) {
      spec.immigration_law(rng, y);
    } else {
      for (auto& v : y) v = -5.0 + 10.0 * uniform01(rng);
    }

    const double kappa = spec.kill_rate(y);
    if (!(kappa > 0.0)) {
      report.violations.push_back({Violation::Kind::kill_rate_nonpositive, y, kappa});
    } else if (kappa > spec.kill_rate_bound * (1.0 + 1e-12)) {
      report.violations.push_back({Violation::Kind::kill_rate_exceeds_bound, y, kappa});
    }

    spec.offspring(y, probs);
    double total = 0.0;
    double mean = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
      if (!(probs[k] >= 0.0 && probs[k] <= 1.0)) {
        throw ValidationError("offspring probability p_" + std::to_string(k) +
                              " outside [0,1] at a sampled point");
      }
      total += probs[k];
      mean += static_cast<double>(k) * probs[k];
    }
    if (std::abs(total - 1.0) > 1e-12) {
      report.violations.push_back({Violation::Kind::normalization, y, total});
    }
    if (mean > spec.rho_bound * (1.0 + 1e-12) + 1e-15) {
      report.violations.push_back({Violation::Kind::rho_exceeds_bound, y, mean});
    }
    report.min_net_death_rate = std::min(report.min_net_death_rate, kappa * (1.0 - mean));
    ++report.points_checked;
  }
  return report;
}

double suggest_dt(const ModelSpec& spec, double observation_step, double ratio) {
  if (!(observation_step > 0.0) || !(ratio >= 1.0)) {
    throw PreconditionError("suggest_dt: need observation_step > 0 and ratio >= 1");
  }
  double dt = observation_step / std::ceil(ratio);
  const double cap = 0.1 / spec.lipschitz_hint;
  if (dt > cap) {
    // keep the observation step an integer multiple of dt
    dt = observation_step / std::ceil(observation_step / cap);
  }
  return dt;
}

}  // namespace bdikit::model
