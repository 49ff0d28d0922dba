#pragma once

#include <cstdint>
#include <random>

namespace bdikit {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; bijective on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Counter-based stream derivation: seed for stream `stream` of master seed `master`.
/// derive_seed(m, s) = splitmix64(m ^ splitmix64(s + 0x9E3779B97F4A7C15)).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

inline Rng make_rng(std::uint64_t master, std::uint64_t stream) {
  return Rng(derive_seed(master, stream));
}

/// Child generator seeded from one draw of the parent.
inline Rng split(Rng& parent) { return Rng(splitmix64(parent())); }

double uniform01(Rng& rng);
double standard_normal(Rng& rng);
double exponential(Rng& rng, double rate);

}  // namespace bdikit
