#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bdikit/rng.hpp"

namespace bdikit::model {

using ConstPoint = std::span<const double>;
using MutPoint = std::span<double>;

/// Full specification of a branching diffusion with immigration on R^d.
///
/// Particles follow dX = b(X)dt + sigma(X)dW, die at rate kappa(X), and at
/// death leave k offspring with probability p_k(X), placed at X + v_j with
/// (v_1..v_k) drawn from the scatter kernel. Immigrants arrive at constant
/// rate c with positions drawn from the immigration law.
///
/// A ModelSpec is immutable after construction; all callbacks must be pure
/// (apart from the generator they are handed) so that a spec can be shared
/// between concurrent workers.
struct ModelSpec {
  std::string name;
  int dim = 1;

  /// b(x), written into out (size dim).
  std::function<void(ConstPoint x, MutPoint out)> drift;
  /// sigma(x), row-major dim x dim, written into out.
  std::function<void(ConstPoint x, MutPoint out)> volatility;

  std::function<double(ConstPoint x)> kill_rate;
  double kill_rate_bound = 1.0;

  /// (p_0 .. p_Kmax)(x) written into out (size max_offspring + 1).
  std::function<void(ConstPoint x, MutPoint out)> offspring;
  int max_offspring = 0;
  double rho_bound = 0.0;

  /// Offsets v_1..v_k (k*dim values, particle-major) for a parent dying at y.
  std::function<void(ConstPoint y, int k, Rng& rng, MutPoint out)> scatter;

  double immigration_rate = 0.0;
  std::function<void(Rng& rng, MutPoint out)> immigration_law;
  /// Restart law used by the auxiliary jump kernel where rho(y) = 0.
  std::function<void(Rng& rng, MutPoint out)> fallback_law;

  double lipschitz_hint = 1.0;
};

/// Offspring probability vector at y (size max_offspring + 1).
std::vector<double> offspring_at(const ModelSpec& spec, ConstPoint y);

/// Mean offspring number sum_k k p_k(y).
double rho(const ModelSpec& spec, ConstPoint y);

/// sum_k k^q p_k(y); q >= 1.
double moment_mq(const ModelSpec& spec, ConstPoint y, int q);

/// Draw k ~ (p_k(y)) given the probability vector.
int sample_offspring_count(std::span<const double> probs, Rng& rng);

/// Draw k with probability k p_k / rho (size-biased law). probs must have rho > 0.
int sample_size_biased_count(std::span<const double> probs, Rng& rng);

struct Violation {
  enum class Kind { kill_rate_nonpositive, kill_rate_exceeds_bound, rho_exceeds_bound, normalization };
  Kind kind;
  std::vector<double> point;
  double value;
};

std::string to_string(Violation::Kind kind);

struct ValidationReport {
  std::size_t points_checked = 0;
  std::vector<Violation> violations;
  /// Sampled minimum of kappa(y)(1 - rho(y)); a positive value suggests subcriticality.
  double min_net_death_rate = 0.0;

  bool ok() const { return violations.empty(); }
};

/// Spot-checks the declared bounds at sampled points.
///
/// Points: the origin, then alternately immigration-law draws and uniform
/// draws from [-5, 5]^d. Throws ValidationError for a malformed spec
/// (nonpositive declared rates, missing callbacks, probabilities outside [0,1]).
ValidationReport validate_spec(const ModelSpec& spec, std::size_t sample_budget, Rng& rng);

/// Integration step for downstream experiments: observation step / ratio,
/// further capped by 0.1 / lipschitz_hint.
double suggest_dt(const ModelSpec& spec, double observation_step, double ratio = 20.0);

}  // namespace bdikit::model
