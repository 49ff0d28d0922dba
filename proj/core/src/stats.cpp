#include "bdikit/stats.hpp"

#include <algorithm>
#include <cmath>

#include "bdikit/errors.hpp"
#include "bdikit/rng.hpp"

namespace bdikit::stats {

namespace {

double stddev(const std::vector<double>& v) {
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double delta = v[i] - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v[i] - mean);
  }
  return v.size() > 1 ? std::sqrt(m2 / static_cast<double>(v.size() - 1)) : 0.0;
}

std::size_t index_below(Rng& rng, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)));
}

}  // namespace

Estimate mean_estimate(std::span<const double> xs) {
  if (xs.size() < 2) throw PreconditionError("mean_estimate needs at least two values");
  const std::vector<double> v(xs.begin(), xs.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  return {sum / static_cast<double>(v.size()), stddev(v) / std::sqrt(static_cast<double>(v.size()))};
}

Estimate ratio_bootstrap(std::span<const double> numer, std::span<const double> denom, std::size_t resamples,
                         std::uint64_t seed) {
  if (numer.size() != denom.size()) throw PreconditionError("ratio_bootstrap: length mismatch");
  const std::size_t n = numer.size();
  if (n == 0) throw PreconditionError("ratio_bootstrap: no cycles");
  double sn = 0.0;
  double sd = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sn += numer[i];
    sd += denom[i];
  }
  if (!(sd > 0.0)) throw PreconditionError("ratio_bootstrap: denominator total must be positive");
  Estimate out{sn / sd, 0.0};
  if (n < 2 || resamples < 2) return out;
  Rng rng(seed);
  std::vector<double> reps;
  reps.reserve(resamples);
  for (std::size_t b = 0; b < resamples; ++b) {
    double bn = 0.0;
    double bd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = index_below(rng, n);
      bn += numer[j];
      bd += denom[j];
    }
    if (bd > 0.0) reps.push_back(bn / bd);
  }
  out.std_error = stddev(reps);
  return out;
}

Estimate block_bootstrap_mean(std::span<const double> xs, std::size_t resamples, std::size_t block,
                              std::uint64_t seed) {
  const std::size_t n = xs.size();
  if (n == 0) return {};
  double sum = 0.0;
  for (double x : xs) sum += x;
  Estimate out{sum / static_cast<double>(n), 0.0};
  if (n < 2 || resamples < 2) return out;
  if (block == 0) block = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  block = std::min(block, n);
  // prefix sums make each block O(1)
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + xs[i];
  const std::size_t starts = n - block + 1;
  const std::size_t blocks = (n + block - 1) / block;
  Rng rng(seed);
  std::vector<double> reps;
  reps.reserve(resamples);
  for (std::size_t b = 0; b < resamples; ++b) {
    double s = 0.0;
    for (std::size_t k = 0; k < blocks; ++k) {
      const std::size_t i = index_below(rng, starts);
      s += prefix[i + block] - prefix[i];
    }
    reps.push_back(s / static_cast<double>(blocks * block));
  }
  out.std_error = stddev(reps);
  return out;
}

double lag1_autocorrelation(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 3) throw PreconditionError("lag1_autocorrelation needs at least three values");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(n);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    den += (xs[i] - mean) * (xs[i] - mean);
    if (i + 1 < n) num += (xs[i] - mean) * (xs[i + 1] - mean);
  }
  return den > 0.0 ? num / den : 0.0;
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw PreconditionError("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw PreconditionError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_1pct(double n_eff) { return 1.628 / std::sqrt(n_eff); }

}  // namespace bdikit::stats
