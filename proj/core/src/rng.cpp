#include "bdikit/rng.hpp"

#include <cmath>

namespace bdikit {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  return splitmix64(master ^ splitmix64(stream + 0x9E3779B97F4A7C15ULL));
}

// The std distributions are implementation-defined; these are fixed so that
// streams are reproducible across standard libraries.
double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(Rng& rng) {
  // Marsaglia polar method, one variate per call (the spare is discarded).
  for (;;) {
    const double u = 2.0 * uniform01(rng) - 1.0;
    const double v = 2.0 * uniform01(rng) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double exponential(Rng& rng, double rate) {
  double u;
  do {
    u = uniform01(rng);
  } while (u == 0.0);
  return -std::log(u) / rate;
}

}  // namespace bdikit
