#pragma once

#include <cstdint>
#include <random>

namespace tabmem {

using Rng = std::mt19937_64;

/// Seed for the independent stream of item `index` under a run seed. Every
/// per-sample generator is derived this way so results do not depend on how
/// items are scheduled across workers.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

inline Rng make_stream(std::uint64_t seed, std::uint64_t index) { return Rng(stream_seed(seed, index)); }

/// Uniform draw in [0, 1) built from the top 53 bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, n) by rejection, independent of library distribution details.
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

/// Standard normal draw (Marsaglia polar method, one value per call).
double standard_normal(Rng& rng);

}  // namespace tabmem
