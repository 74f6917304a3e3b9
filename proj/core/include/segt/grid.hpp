// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

namespace segt {

/// A 3-component integer voxel coordinate (x, y, z).
using VoxelCoord = std::array<std::uint32_t, 3>;

/// Axis-aligned detection volume discretized into voxels.
///
/// dims is derived as ceil((range_max - range_min) / voxel_size) per axis;
/// points are binned with floor((p - range_min) / voxel_size) over the
/// half-open interval [range_min, range_max).
struct GridSpec {
    std::array<double, 3> range_min{};
    std::array<double, 3> range_max{};
    std::array<double, 3> voxel_size{};
    std::array<std::uint32_t, 3> dims{};

    /// Validates the ranges and derives dims. Throws config_error.
    static GridSpec create(const std::array<double, 3>& range_min,
                           const std::array<double, 3>& range_max,
                           const std::array<double, 3>& voxel_size);

    bool single_layer() const { return dims[2] == 1; }
    std::uint32_t max_dim() const;
    std::uint64_t cell_count() const {
        return static_cast<std::uint64_t>(dims[0]) * dims[1] * dims[2];
    }
};

} // namespace segt
