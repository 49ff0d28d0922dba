#pragma once

#include <vector>

namespace bdikit {

/// Kernel of a given order on [-1, 1]: K(u) = W(u) P(u) with the
/// Epanechnikov weight W(u) = 3/4 (1 - u^2) and P the polynomial
/// sum_{j <= order} p_j(0) p_j(u), where (p_j) are orthonormal for W.
/// The reproducing property gives int K = 1 and int u^r K = 0 for
/// r = 1..order; order 1 is the Epanechnikov kernel itself.
struct Kernel {
  int order = 1;
  std::vector<double> poly;  ///< coefficients of P, lowest degree first
  double lipschitz_constant = 0.0;
  double sup_abs = 0.0;

  double operator()(double u) const;
  /// K_h(v) = K(v / h) / h
  double scaled(double v, double h) const { return (*this)(v / h) / h; }
};

Kernel make_kernel(int order);

/// (8 beta + 3) / (16 beta + 8); beta >= 2.
double critical_lambda(double beta);

/// Largest integer strictly below beta.
int kernel_order_for(double beta);

}  // namespace bdikit
