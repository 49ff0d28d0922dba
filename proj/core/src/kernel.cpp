#include "bdikit/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "bdikit/errors.hpp"

namespace bdikit {

namespace {

// int_{-1}^{1} u^k * 3/4 (1 - u^2) du
double weight_moment(std::size_t k) {
  if (k % 2 == 1) return 0.0;
  const double kk = static_cast<double>(k);
  return 0.75 * (2.0 / (kk + 1.0) - 2.0 / (kk + 3.0));
}

double inner(const std::vector<double>& f, const std::vector<double>& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) s += f[i] * g[j] * weight_moment(i + j);
  }
  return s;
}

double horner(const std::vector<double>& c, double u) {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * u + c[i];
  return v;
}

}  // namespace

double Kernel::operator()(double u) const {
  if (!(u > -1.0 && u < 1.0)) return 0.0;
  return 0.75 * (1.0 - u * u) * horner(poly, u);
}

Kernel make_kernel(int order) {
  if (order < 1) throw PreconditionError("kernel order must be >= 1");
  const auto deg = static_cast<std::size_t>(order);
  std::vector<std::vector<double>> basis;
  for (std::size_t j = 0; j <= deg; ++j) {
    std::vector<double> p(deg + 1, 0.0);
    p[j] = 1.0;
    for (const auto& q : basis) {
      const double proj = inner(p, q);
      for (std::size_t i = 0; i <= deg; ++i) p[i] -= proj * q[i];
    }
    const double norm = std::sqrt(inner(p, p));
    for (auto& v : p) v /= norm;
    basis.push_back(std::move(p));
  }

  Kernel k;
  k.order = order;
  k.poly.assign(deg + 1, 0.0);
  for (const auto& q : basis) {
    for (std::size_t i = 0; i <= deg; ++i) k.poly[i] += q[0] * q[i];
  }

  // K' = W' P + W P' on (-1, 1); K vanishes at +-1, so sup|K'| is a global Lipschitz constant.
  std::vector<double> dpoly(deg, 0.0);
  for (std::size_t i = 1; i <= deg; ++i) dpoly[i - 1] = static_cast<double>(i) * k.poly[i];
  constexpr int samples = 20000;
  for (int s = 0; s <= samples; ++s) {
    const double u = -1.0 + 2.0 * s / samples;
    const double p = horner(k.poly, u);
    const double dp = horner(dpoly, u);
    const double deriv = -1.5 * u * p + 0.75 * (1.0 - u * u) * dp;
    k.lipschitz_constant = std::max(k.lipschitz_constant, std::abs(deriv));
    k.sup_abs = std::max(k.sup_abs, std::abs(0.75 * (1.0 - u * u) * p));
  }
  // dense sampling can undershoot the true maximum by O(grid^2); pad slightly
  k.lipschitz_constant *= 1.0 + 1e-6;
  k.sup_abs *= 1.0 + 1e-6;
  return k;
}

double critical_lambda(double beta) {
  if (!(beta >= 2.0)) throw PreconditionError("critical_lambda needs beta >= 2");
  return (8.0 * beta + 3.0) / (16.0 * beta + 8.0);
}

int kernel_order_for(double beta) {
  if (!(beta > 1.0)) throw PreconditionError("beta must exceed 1");
  const double f = std::floor(beta);
  return static_cast<int>(f == beta ? f - 1.0 : f);
}

}  // namespace bdikit
