#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bdikit/model.hpp"
#include "bdikit/rng.hpp"

namespace bdikit::verify {

/// One oracle comparison. pass iff |analytic - simulated| <= 3 SE.
struct OracleReport {
  std::string quantity;
  double analytic = 0.0;
  double simulated = 0.0;
  double std_error = 0.0;
  double z_score = 0.0;
  bool pass = false;
};

/// Builds a report; an SE of exactly zero compares with a 1e-12 absolute floor.
OracleReport make_report(std::string quantity, double analytic, double simulated, double std_error);

/// Stationary Poisson(c/kappa) moments: (c/kappa, c/kappa + (c/kappa)^2).
std::pair<double, double> mm_infinity_moments(double c, double kappa);

/// c exp(-sqrt(2 kappa)|z|) / sqrt(2 kappa): occupation density of the
/// pure-death Brownian model with immigrants at 0.
double pure_death_occupation_density(double c, double kappa, double z);

/// Expected count at t from one particle at y, estimated directly (branching
/// simulation) and by Feynman-Kac; reports compare each with the other, plus
/// each with exp(-kappa(1-rho)t) when constant_rates is true.
std::vector<OracleReport> expectation_semigroup_compare(const model::ModelSpec& spec, model::ConstPoint y, double t,
                                                        double dt, std::size_t n_direct, std::size_t n_fk, Rng& rng,
                                                        bool constant_rates);

/// mu(l^q) for constant coefficients and local scatter; q in {1, 2}.
double moment_formula(double c, double kappa, double rho, int q, double m2);

}  // namespace bdikit::verify
