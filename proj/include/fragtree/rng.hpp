#pragma once

#include <cstdint>
#include <cmath>
#include <random>
#include <string_view>

namespace fragtree {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for replicate `index` of the experiment `tag` under `master`.
/// Depends only on its arguments, so results never depend on how replicates
/// are scheduled across workers.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index);

inline Rng make_rng(std::uint64_t master, std::string_view tag, std::uint64_t index) {
  return Rng(derive_seed(master, tag, index));
}

/// Uniform on the open interval (0, 1).
inline double uniform01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline double standard_exponential(Rng& rng) { return -std::log(uniform01(rng)); }

std::uint64_t poisson(Rng& rng, double mean);

/// Gamma(shape, 1).
double gamma_variate(Rng& rng, double shape);

/// Beta(a, b) via the gamma ratio.
double beta_variate(Rng& rng, double a, double b);

}  // namespace fragtree
