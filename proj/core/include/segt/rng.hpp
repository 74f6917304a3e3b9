// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace segt {

/// SplitMix64 generator (Steele, Lea & Flood; Vigna's reference constants).
///
/// Chosen as the project-wide seeded generator because it is trivially
/// portable: the state is a 64-bit Weyl counter and each output is a fixed
/// integer hash of it, so streams are identical on every platform and
/// toolchain. Reference vectors are frozen in the test suite.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double next_uniform(double lo, double hi) {
        return lo + next_unit() * (hi - lo);
    }

    /// Uniform integer in [0, bound) by rejection; bound must be nonzero.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t v = next();
        while (v >= limit) {
            v = next();
        }
        return v % bound;
    }

private:
    std::uint64_t state_;
};

} // namespace segt
