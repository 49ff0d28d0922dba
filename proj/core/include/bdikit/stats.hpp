#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace bdikit::stats {

struct Estimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Sample mean and its standard error (n >= 2).
Estimate mean_estimate(std::span<const double> xs);

/// Ratio sum(numer)/sum(denom) over i.i.d. cycles, with a cycle-bootstrap
/// standard error from `resamples` resamples. The bootstrap generator is
/// seeded from `seed` only, so the result is a function of the data.
Estimate ratio_bootstrap(std::span<const double> numer, std::span<const double> denom,
                         std::size_t resamples = 400, std::uint64_t seed = 0x5eedULL);

/// Mean of a dependent series with a moving-block bootstrap standard error;
/// block length defaults to ceil(sqrt(n)).
Estimate block_bootstrap_mean(std::span<const double> xs, std::size_t resamples = 200, std::size_t block = 0,
                              std::uint64_t seed = 0x5eedULL);

/// Lag-1 sample autocorrelation.
double lag1_autocorrelation(std::span<const double> xs);

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Asymptotic 1% critical value of sqrt(n_eff) * D, i.e. 1.628 / sqrt(n_eff).
double ks_critical_1pct(double n_eff);

}  // namespace bdikit::stats
