// SPDX-License-Identifier: MIT
/**
 * @file rng.hpp
 * @brief Counter-based uniform variates keyed by (seed, index).
 */

#pragma once

#include <cstdint>

namespace thetaexp {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stateless stream: the k-th value depends only on (seed, k), so samples can
/// be drawn in any order or split across workers.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed) noexcept : key_(mix64(seed)) {}

    [[nodiscard]] constexpr std::uint64_t bits(std::uint64_t index, std::uint64_t lane) const noexcept {
        return mix64(key_ ^ mix64(index * 2 + lane));
    }

    /// Uniform on (0, 1), never exactly 0 or 1.
    [[nodiscard]] constexpr double uniform(std::uint64_t index, std::uint64_t lane) const noexcept {
        return (static_cast<double>(bits(index, lane) >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t key_;
};

}  // namespace thetaexp
