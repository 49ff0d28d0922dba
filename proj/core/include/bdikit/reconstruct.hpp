#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bdikit/bdi.hpp"
#include "bdikit/configuration.hpp"
#include "bdikit/observe.hpp"
#include "bdikit/stats.hpp"

namespace bdikit {

struct MatchResult {
  enum class Status { identified, not_identifiable };
  enum class Reason { none, void_config, x_not_wellspread, y_not_wellspread, length_mismatch, no_valid_permutation };
  Status status = Status::not_identifiable;
  Reason reason = Reason::void_config;
  /// permutation[k] is the index in y matched to particle k of x.
  std::vector<std::size_t> permutation;

  bool identified() const { return status == Status::identified; }
};

std::string to_string(MatchResult::Reason reason);

/// (delta, lambda)-identifiability of the pair (x, y).
///
/// Checks, in order: l(x) = l(y) = l >= 1; x is 4 r-wellspread; y is
/// 2 r-wellspread, where r = delta^lambda. Then particle k of x is matched to
/// the unique j with |y_j - x_k| < r in every coordinate, and the pair is
/// identified iff this gives a bijection.
MatchResult match_pair(const Configuration& x, const Configuration& y, double delta, double lambda);

struct PairReconstruction {
  MatchResult match;
  /// y_{pi(k)} - x_k for every k of x (l * d values); empty unless identified.
  std::vector<double> increments;
};

std::vector<PairReconstruction> reconstruct_increments(const std::vector<Configuration>& observations, double delta,
                                                       double lambda);

/// Outcome counts of reconstruction against lineage truth.
struct ReconStats {
  double delta = 0.0;
  double lambda = 0.0;
  std::size_t n_pairs = 0;
  std::size_t n_nonvoid = 0;
  std::size_t n_identifiable = 0;
  std::size_t n_identifiable_correct = 0;
  std::size_t n_identifiable_wrong = 0;
  std::size_t n_nonvoid_not_ci = 0;
  std::size_t n_ci = 0;
  std::size_t n_ci_not_identifiable = 0;  ///< violations of CI => identifiable
  std::size_t n_ci_wrong = 0;             ///< CI segments with a wrong permutation

  /// Per-pair bit codes (see the k* constants), in pair order.
  std::vector<std::uint8_t> codes;
  static constexpr std::uint8_t kNonvoid = 1, kCi = 2, kIdentifiable = 4, kCorrect = 8;

  double proportion(std::size_t count) const {
    return n_pairs ? static_cast<double>(count) / static_cast<double>(n_pairs) : 0.0;
  }
  /// Block-bootstrap estimate of the proportion of pairs whose code satisfies pred.
  stats::Estimate proportion_estimate(bool (*pred)(std::uint8_t)) const;

  void add(bool nonvoid, bool ci, const MatchResult& match, bool correct);
};

bool is_nonvoid_not_ci(std::uint8_t code);
bool is_identifiable(std::uint8_t code);
bool is_identifiable_wrong(std::uint8_t code);
bool is_ci(std::uint8_t code);

/// True iff start.ids[k] == end.ids[pi(k)] for every k.
bool permutation_matches_truth(const MatchResult& match, const SegmentRecord& truth);

ReconStats classify_against_truth(const std::vector<PairReconstruction>& pairs,
                                  const std::vector<SegmentRecord>& truth, double delta, double lambda);

/// Indicators of N(eps) for each eps, named by n_epsilon_name.
std::vector<Functional> wellspread_functionals(const std::vector<double>& eps_list);
std::string n_epsilon_name(double eps);

struct WellspreadEstimate {
  double eps = 0.0;
  stats::Estimate mu;
};

/// Ratio estimates of mu(N(eps)); eps = 0 gives exactly 0.
std::vector<WellspreadEstimate> wellspread_measure_estimate(const ExcursionStats& stats,
                                                            const std::vector<double>& eps_list);

}  // namespace bdikit
