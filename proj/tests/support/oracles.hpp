#pragma once

// Reference computations used by the tests. These are written independently
// of the library code they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include "bdikit/configuration.hpp"

namespace oracle {

/// Composite 5-point Gauss-Legendre rule.
inline double integrate(const std::function<double(double)>& f, double a, double b, int panels = 2000) {
  static const double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                              0.9061798459386640};
  static const double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
                              0.2369268850561891};
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < 5; ++i) s += w[i] * f(mid + 0.5 * h * x[i]);
  }
  return 0.5 * h * s;
}

inline double normal_cdf(double x, double sd = 1.0) { return 0.5 * std::erfc(-x / (sd * std::sqrt(2.0))); }

/// Closed-form second particle-count moment of the stationary law for
/// constant rates and local scatter: c I2 + (c I1)^2 with
/// I1 = 1/a, I2 = 1/a + kappa (m2 - rho) / (2 a^2), a = kappa (1 - rho).
inline double second_moment_closed_form(double c, double kappa, double rho, double m2) {
  const double a = kappa * (1.0 - rho);
  const double i2 = 1.0 / a + kappa * (m2 - rho) / (2.0 * a * a);
  return c * i2 + (c / a) * (c / a);
}

/// Every permutation pi with |y_pi(k) - x_k| < r in every coordinate.
inline std::vector<std::vector<std::size_t>> matching_permutations(const bdikit::Configuration& x,
                                                                   const bdikit::Configuration& y, double r) {
  std::vector<std::vector<std::size_t>> out;
  const std::size_t n = x.size();
  if (n == 0 || y.size() != n) return out;
  std::vector<std::size_t> pi(n);
  std::iota(pi.begin(), pi.end(), std::size_t{0});
  do {
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) {
      for (int m = 0; m < x.dim && ok; ++m) ok = std::abs(y.coord(pi[k], m) - x.coord(k, m)) < r;
    }
    if (ok) out.push_back(pi);
  } while (std::next_permutation(pi.begin(), pi.end()));
  return out;
}

/// Pairwise wellspread test straight from the definition.
inline bool wellspread(const bdikit::Configuration& x, double eps) {
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = a + 1; b < x.size(); ++b) {
      for (int m = 0; m < x.dim; ++m) {
        if (std::abs(x.coord(a, m) - x.coord(b, m)) < eps) return false;
      }
    }
  }
  return true;
}

}  // namespace oracle
