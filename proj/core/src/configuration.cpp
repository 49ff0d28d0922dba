#include "bdikit/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bdikit/errors.hpp"

namespace bdikit {

Configuration make_configuration(std::vector<double> flat_positions, int dim) {
  if (dim < 1 || flat_positions.size() % static_cast<std::size_t>(dim) != 0) {
    throw PreconditionError("position list does not match the dimension");
  }
  Configuration x(dim);
  x.positions = std::move(flat_positions);
  return x;
}

Configuration canonical(const Configuration& x, bool keep_ids) {
  const std::size_t n = x.size();
  const auto d = static_cast<std::size_t>(x.dim);
  const bool ids = x.has_ids();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < d; ++j) {
      const double xa = x.positions[a * d + j];
      const double xb = x.positions[b * d + j];
      if (xa != xb) return xa < xb;
    }
    return ids ? x.ids[a] < x.ids[b] : a < b;
  });
  Configuration out(x.dim);
  out.positions.reserve(x.positions.size());
  for (auto i : order) {
    out.push_back(x.at(i));
    if (keep_ids && ids) out.ids.push_back(x.ids[i]);
  }
  return out;
}

bool is_wellspread(const Configuration& x, double eps) {
  if (!(eps > 0.0)) throw PreconditionError("wellspread test needs eps > 0");
  const std::size_t n = x.size();
  const auto d = static_cast<std::size_t>(x.dim);
  if (n <= 1) return true;
  if (d == 1) {
    std::vector<double> v(x.positions);
    std::sort(v.begin(), v.end());
    for (std::size_t i = 1; i < n; ++i) {
      if (v[i] - v[i - 1] < eps) return false;
    }
    return true;
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t j = 0; j < d; ++j) {
        if (std::abs(x.positions[a * d + j] - x.positions[b * d + j]) < eps) return false;
      }
    }
  }
  return true;
}

bool in_N_epsilon(const Configuration& x, double eps) {
  if (x.size() < 2 || eps <= 0.0) return false;
  return !is_wellspread(x, eps);
}

}  // namespace bdikit
