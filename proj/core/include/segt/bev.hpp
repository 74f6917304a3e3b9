// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "segt/grid.hpp"
#include "segt/voxel_set.hpp"

namespace segt {

/// Dense top-down feature grid of shape dims.x * dims.y * channels,
/// x-major. Cells with no voxel are exactly zero.
struct BevGrid {
    GridSpec grid;
    std::size_t channels = 0;
    std::vector<double> values;

    std::span<const double> cell(std::size_t x, std::size_t y) const {
        return {values.data() + (x * grid.dims[1] + y) * channels, channels};
    }
    std::span<double> cell(std::size_t x, std::size_t y) {
        return {values.data() + (x * grid.dims[1] + y) * channels, channels};
    }
};

/// Projects voxel features along z: every cell holds the sum of the
/// feature rows of the voxels that share its (x, y). Accumulation is f64 in
/// voxel row order, so total feature mass is conserved.
BevGrid bev_scatter(const VoxelSet& voxels);

} // namespace segt
