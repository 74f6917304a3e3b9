// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "segt/grid.hpp"

namespace segt {

/// Sparse voxel field: per-voxel feature rows paired with integer grid
/// coordinates. Coordinates are pairwise distinct and component-wise less
/// than grid.dims; rows are kept sorted ascending by (z, y, x) when produced
/// by the voxelizer so downstream output is order-independent.
struct VoxelSet {
    GridSpec grid;
    std::size_t channel_count = 0;
    std::vector<VoxelCoord> coords;  // N x 3
    std::vector<double> features;    // N x channel_count, row-major

    std::size_t size() const { return coords.size(); }

    std::span<const double> feature_row(std::size_t i) const {
        return {features.data() + i * channel_count, channel_count};
    }
    std::span<double> feature_row(std::size_t i) {
        return {features.data() + i * channel_count, channel_count};
    }
};

} // namespace segt
