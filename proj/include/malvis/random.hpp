#pragma once

#include <cstdint>
#include <random>

namespace malvis {

/// Knuth's MMIX 64-bit LCG. Every seeded draw in the toolkit (refnet weights,
/// dataset shuffles) uses the top 53 bits of its outputs.
using Lcg64 = std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL, 1442695040888963407ULL, 0ULL>;

/// Uniform draw in [0, 1).
inline double uniform01(Lcg64& engine) { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

/// Uniform draw in [-0.5, 0.5).
inline double uniform_centered(Lcg64& engine) { return uniform01(engine) - 0.5; }

}  // namespace malvis
