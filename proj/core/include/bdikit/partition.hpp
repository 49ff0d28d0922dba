#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bdikit/model.hpp"

namespace bdikit {

/// Half-open cube [lo, lo + edge)^d.
struct Box {
  std::vector<double> lo;
  double edge = 1.0;

  std::size_t dim() const { return lo.size(); }
  bool contains(model::ConstPoint x) const;
};

/// n^d equal cells of a cube, n = floor(edge * delta^(-1/(2d))). Cells are
/// half-open and indexed in row-major order of their multi-index.
struct CellPartition {
  Box cube;
  std::size_t n = 1;

  std::size_t dim() const { return cube.dim(); }
  double cell_edge() const { return cube.edge / static_cast<double>(n); }
  std::size_t cell_count() const;
  /// Flat index of the cell containing x, if x is in the cube.
  std::optional<std::size_t> cell_of(model::ConstPoint x) const;
  std::vector<std::size_t> multi_index(std::size_t flat) const;
  /// Lower corner coordinate of cell `flat` along `axis`.
  double cell_lo(std::size_t flat, std::size_t axis) const;
};

CellPartition partition(const Box& cube, double delta, int d);

}  // namespace bdikit
