#include "bdikit/partition.hpp"

#include <algorithm>
#include <cmath>

#include "bdikit/errors.hpp"

namespace bdikit {

bool Box::contains(model::ConstPoint x) const {
  for (std::size_t a = 0; a < dim(); ++a) {
    if (!(x[a] >= lo[a] && x[a] < lo[a] + edge)) return false;
  }
  return true;
}

std::size_t CellPartition::cell_count() const {
  std::size_t c = 1;
  for (std::size_t a = 0; a < dim(); ++a) c *= n;
  return c;
}

std::optional<std::size_t> CellPartition::cell_of(model::ConstPoint x) const {
  const double w = cell_edge();
  std::size_t flat = 0;
  for (std::size_t a = 0; a < dim(); ++a) {
    const double off = x[a] - cube.lo[a];
    if (!(off >= 0.0 && off < cube.edge)) return std::nullopt;
    flat = flat * n + std::min(n - 1, static_cast<std::size_t>(off / w));
  }
  return flat;
}

std::vector<std::size_t> CellPartition::multi_index(std::size_t flat) const {
  std::vector<std::size_t> idx(dim());
  for (std::size_t a = dim(); a-- > 0;) {
    idx[a] = flat % n;
    flat /= n;
  }
  return idx;
}

double CellPartition::cell_lo(std::size_t flat, std::size_t axis) const {
  return cube.lo[axis] + static_cast<double>(multi_index(flat)[axis]) * cell_edge();
}

CellPartition partition(const Box& cube, double delta, int d) {
  if (d < 1 || cube.dim() != static_cast<std::size_t>(d)) throw PreconditionError("cube dimension must equal d");
  if (!(cube.edge > 0.0)) throw PreconditionError("cube must be nonempty");
  if (!(delta > 0.0)) throw PreconditionError("delta must be positive");
  const double raw = cube.edge * std::pow(delta, -1.0 / (2.0 * d));
  // guard against pow landing just below an integer
  const double n = std::floor(raw * (1.0 + 1e-12));
  if (n < 1.0) throw PreconditionError("delta too large: the partition would have no cells");
  return {cube, static_cast<std::size_t>(n)};
}

}  // namespace bdikit
