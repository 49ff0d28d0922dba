#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "bdikit/model.hpp"
#include "bdikit/rng.hpp"

namespace bdikit::sde {

using model::ConstPoint;
using model::ModelSpec;
using model::MutPoint;

/// A sampled single-particle path on a time grid (plus jump/kill instants).
struct PathSample {
  int dim = 1;
  double step = 0.0;
  std::vector<double> times;
  std::vector<double> positions;  ///< times.size() * dim, point-major

  std::size_t size() const { return times.size(); }
  ConstPoint at(std::size_t i) const {
    return {positions.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  ConstPoint endpoint() const { return at(size() - 1); }
};

struct KilledOutcome {
  enum class Status { survived, killed };
  Status status = Status::survived;
  double terminal_time = 0.0;
  std::vector<double> terminal_position;
};

/// One Euler-Maruyama step of length h with coefficients frozen at the start
/// point. The Gaussian increment of the whole step is drawn in begin(); the
/// path inside the step is the frozen-coefficient Brownian interpolation and
/// intermediate positions are drawn from the Brownian bridge. Looking inside a
/// step therefore never changes where the step ends.
class EulerStep {
 public:
  void begin(const ModelSpec& spec, ConstPoint x0, double h, Rng& motion);
  /// Position after elapsed time u; successive calls need non-decreasing u <= h.
  void position_at(double u, Rng& bridge, MutPoint out);
  void end(MutPoint out) const;
  double length() const { return h_; }

 private:
  std::size_t d_ = 0;
  double h_ = 0.0;
  double s_ = 0.0;
  std::vector<double> x0_, b_, sig_, g_, w_, tmp_;
};

/// Grid {0, dt, 2dt, ..., horizon}; the last step may be partial.
std::vector<double> time_grid(double horizon, double dt);

/// Euler-Maruyama path of the one-particle diffusion.
PathSample integrate_diffusion(const ModelSpec& spec, ConstPoint y0, double horizon, double dt, Rng& rng);

/// Diffusion killed at rate kappa, killing time sampled by thinning against
/// kill_rate_bound along the path.
std::pair<PathSample, KilledOutcome> sample_killed_motion(const ModelSpec& spec, ConstPoint y0,
                                                          double horizon, double dt, Rng& rng);

/// The auxiliary jump diffusion: diffuses like the particle motion and jumps
/// at rate kappa*rho to y + v_j, where k is size-biased, (v_1..v_k) comes from
/// the scatter kernel and j is uniform. The jump clock is thinned against
/// kill_rate_bound * rho_bound.
PathSample sample_aux_jump_diffusion(const ModelSpec& spec, ConstPoint y0, double horizon, double dt,
                                     Rng& rng);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo estimate of E_y[exp(-int_0^t kappa(1-rho)(aux path) ds)], the
/// expected particle count at t of a branching family started from one
/// particle at y. The exponent is integrated by the trapezoidal rule.
MonteCarloEstimate feynman_kac_survival(const ModelSpec& spec, ConstPoint y0, double t, double dt,
                                        std::size_t n_paths, Rng& rng);

}  // namespace bdikit::sde
