#include "bdikit/reconstruct.hpp"

#include <cmath>
#include <sstream>

#include "bdikit/errors.hpp"

namespace bdikit {

std::string to_string(MatchResult::Reason reason) {
  switch (reason) {
    case MatchResult::Reason::none: return "none";
    case MatchResult::Reason::void_config: return "void";
    case MatchResult::Reason::x_not_wellspread: return "x_not_wellspread";
    case MatchResult::Reason::y_not_wellspread: return "y_not_wellspread";
    case MatchResult::Reason::length_mismatch: return "length_mismatch";
    case MatchResult::Reason::no_valid_permutation: return "no_valid_permutation";
  }
  return "unknown";
}

namespace {

MatchResult fail(MatchResult::Reason reason) {
  MatchResult m;
  m.reason = reason;
  return m;
}

}  // namespace

MatchResult match_pair(const Configuration& x, const Configuration& y, double delta, double lambda) {
  if (!(delta > 0.0)) throw PreconditionError("match_pair needs delta > 0");
  if (x.dim != y.dim) throw PreconditionError("match_pair: dimension mismatch");
  const std::size_t n = x.size();
  if (n == 0) return fail(MatchResult::Reason::void_config);
  if (y.size() != n) return fail(MatchResult::Reason::length_mismatch);
  const double r = std::pow(delta, lambda);
  if (!is_wellspread(x, 4.0 * r)) return fail(MatchResult::Reason::x_not_wellspread);
  if (!is_wellspread(y, 2.0 * r)) return fail(MatchResult::Reason::y_not_wellspread);

  const auto d = static_cast<std::size_t>(x.dim);
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> pi(n, none);
  std::vector<bool> used(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      bool close = true;
      for (std::size_t m = 0; m < d && close; ++m) close = std::abs(y.coord(j, m) - x.coord(k, m)) < r;
      if (!close) continue;
      // x is 4r-spread, so no y_j is within r of two different x_k; a second
      // candidate for the same k is impossible as y is 2r-spread.
      if (pi[k] != none || used[j]) return fail(MatchResult::Reason::no_valid_permutation);
      pi[k] = j;
      used[j] = true;
    }
    if (pi[k] == none) return fail(MatchResult::Reason::no_valid_permutation);
  }
  MatchResult m;
  m.status = MatchResult::Status::identified;
  m.reason = MatchResult::Reason::none;
  m.permutation = std::move(pi);
  return m;
}

std::vector<PairReconstruction> reconstruct_increments(const std::vector<Configuration>& obs, double delta,
                                                       double lambda) {
  std::vector<PairReconstruction> out;
  if (obs.size() < 2) return out;
  out.reserve(obs.size() - 1);
  for (std::size_t i = 0; i + 1 < obs.size(); ++i) {
    PairReconstruction p;
    p.match = match_pair(obs[i], obs[i + 1], delta, lambda);
    if (p.match.identified()) {
      const auto d = static_cast<std::size_t>(obs[i].dim);
      p.increments.resize(obs[i].positions.size());
      for (std::size_t k = 0; k < obs[i].size(); ++k) {
        for (std::size_t m = 0; m < d; ++m) {
          p.increments[k * d + m] = obs[i + 1].coord(p.match.permutation[k], m) - obs[i].coord(k, m);
        }
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

bool is_nonvoid_not_ci(std::uint8_t c) { return (c & ReconStats::kNonvoid) && !(c & ReconStats::kCi); }
bool is_identifiable(std::uint8_t c) { return c & ReconStats::kIdentifiable; }
bool is_identifiable_wrong(std::uint8_t c) {
  return (c & ReconStats::kIdentifiable) && !(c & ReconStats::kCorrect);
}
bool is_ci(std::uint8_t c) { return c & ReconStats::kCi; }

void ReconStats::add(bool nonvoid, bool ci, const MatchResult& match, bool correct) {
  ++n_pairs;
  std::uint8_t code = 0;
  if (nonvoid) {
    ++n_nonvoid;
    code |= kNonvoid;
    if (!ci) ++n_nonvoid_not_ci;
  }
  if (ci) {
    ++n_ci;
    code |= kCi;
    if (!match.identified()) ++n_ci_not_identifiable;
  }
  if (match.identified()) {
    ++n_identifiable;
    code |= kIdentifiable;
    if (correct) {
      ++n_identifiable_correct;
      code |= kCorrect;
    } else {
      ++n_identifiable_wrong;
      if (ci) ++n_ci_wrong;
    }
  }
  codes.push_back(code);
}

stats::Estimate ReconStats::proportion_estimate(bool (*pred)(std::uint8_t)) const {
  std::vector<double> ind(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) ind[i] = pred(codes[i]) ? 1.0 : 0.0;
  return stats::block_bootstrap_mean(ind);
}

bool permutation_matches_truth(const MatchResult& match, const SegmentRecord& truth) {
  if (!match.identified()) return false;
  const auto& s = truth.start_config;
  const auto& e = truth.end_config;
  if (!s.has_ids() || !e.has_ids() || s.size() != match.permutation.size()) return false;
  for (std::size_t k = 0; k < match.permutation.size(); ++k) {
    const std::size_t j = match.permutation[k];
    if (j >= e.size() || s.ids[k] != e.ids[j]) return false;
  }
  return true;
}

ReconStats classify_against_truth(const std::vector<PairReconstruction>& pairs,
                                  const std::vector<SegmentRecord>& truth, double delta, double lambda) {
  if (pairs.size() != truth.size()) throw PreconditionError("pairs and truth records are misaligned");
  ReconStats st;
  st.delta = delta;
  st.lambda = lambda;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& seg = truth[i];
    st.add(!seg.start_config.empty(), seg.ci_flag(delta, lambda), pairs[i].match,
           permutation_matches_truth(pairs[i].match, seg));
  }
  return st;
}

std::string n_epsilon_name(double eps) {
  std::ostringstream os;
  os.precision(17);
  os << "N(" << eps << ")";
  return os.str();
}

std::vector<Functional> wellspread_functionals(const std::vector<double>& eps_list) {
  std::vector<Functional> out;
  for (double eps : eps_list) {
    if (!(eps >= 0.0)) throw PreconditionError("eps must be nonnegative");
    out.push_back({n_epsilon_name(eps), [eps](const Configuration& x) { return in_N_epsilon(x, eps) ? 1.0 : 0.0; }});
  }
  return out;
}

std::vector<WellspreadEstimate> wellspread_measure_estimate(const ExcursionStats& s,
                                                            const std::vector<double>& eps_list) {
  std::vector<WellspreadEstimate> out;
  for (double eps : eps_list) {
    if (eps == 0.0) {
      out.push_back({eps, {0.0, 0.0}});
      continue;
    }
    out.push_back({eps, functional_mean(s, n_epsilon_name(eps))});
  }
  return out;
}

}  // namespace bdikit
