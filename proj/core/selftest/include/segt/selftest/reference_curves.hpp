// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace segt::selftest {

using Cell = std::array<std::uint32_t, 3>;

/// Normative reference: generates the full visit order of the curve at the
/// given level by recursive subdivision, carrying the entry-corner and
/// travel-direction state of each subcube. Independent of the per-point
/// production kernel, which must match it cell for cell.
std::vector<Cell> reference_curve(unsigned level, unsigned dim);

/// Second, fully geometric 2D construction: a level-L curve is four
/// transformed level-(L-1) copies visiting quadrants (0,0), (0,1), (1,1),
/// (1,0) with transpose / identity / identity / anti-transpose transforms.
/// Used to pin the base orientation from first principles.
std::vector<Cell> quadrant_curve_2d(unsigned level);

} // namespace segt::selftest
