// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>

namespace segt::hilbert {

/// Maximum supported curve level (bits per axis).
inline constexpr unsigned kMaxLevel = 16;

/// Maps a cell of the [0, 2^level)^dim cube to its index on the Hilbert
/// curve. Bijective over the full cube. dim must be 2 or 3; level may be 0
/// (degenerate single-cell curve) up to kMaxLevel.
///
/// The curve is the reflected-Gray-code construction driven by per-subcube
/// entry points and travel directions (Hamilton's formulation). At level 1
/// in 2D it visits (0,0), (0,1), (1,1), (1,0) in that order; consecutive
/// indices always decode to cells at Manhattan distance 1. The recursive
/// generator in the self-test suite is the normative definition; this
/// kernel is verified against it exhaustively.
std::uint64_t encode(std::span<const std::uint32_t> coord, unsigned level, unsigned dim);

/// Exact inverse of encode.
void decode(std::uint64_t index, unsigned level, unsigned dim, std::span<std::uint32_t> coord_out);

/// Convenience wrappers.
std::uint64_t encode2(std::uint32_t x, std::uint32_t y, unsigned level);
std::uint64_t encode3(std::uint32_t x, std::uint32_t y, std::uint32_t z, unsigned level);

} // namespace segt::hilbert
