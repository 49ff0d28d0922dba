#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bdikit/model.hpp"

namespace bdikit {

using model::ConstPoint;
using model::MutPoint;

/// Ordered particle configuration in (R^d)^l. The void configuration has no
/// particles. Lineage ids are ground truth and are empty for observed data.
struct Configuration {
  int dim = 1;
  std::vector<double> positions;  ///< size() * dim, particle-major
  std::vector<std::uint64_t> ids;

  Configuration() = default;
  explicit Configuration(int d) : dim(d) {}

  std::size_t size() const { return positions.size() / static_cast<std::size_t>(dim); }
  bool empty() const { return positions.empty(); }
  bool has_ids() const { return !empty() && ids.size() == size(); }

  ConstPoint at(std::size_t i) const {
    return {positions.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  double coord(std::size_t i, std::size_t j) const { return positions[i * static_cast<std::size_t>(dim) + j]; }

  void push_back(ConstPoint x) { positions.insert(positions.end(), x.begin(), x.end()); }
  void push_back(ConstPoint x, std::uint64_t id) {
    push_back(x);
    ids.push_back(id);
  }
  void clear() {
    positions.clear();
    ids.clear();
  }

  bool operator==(const Configuration&) const = default;
};

/// Builds a d = 1 configuration from a list of positions (no ids).
Configuration make_configuration(std::vector<double> flat_positions, int dim = 1);

/// Particles sorted lexicographically by coordinates (ties by id). Ids are
/// kept when keep_ids is true and dropped otherwise.
Configuration canonical(const Configuration& x, bool keep_ids);

/// True iff l(x) <= 1 or every pair differs by at least eps in every coordinate.
bool is_wellspread(const Configuration& x, double eps);

/// True iff l(x) >= 2 and some pair has a coordinate gap below eps.
bool in_N_epsilon(const Configuration& x, double eps);

}  // namespace bdikit
