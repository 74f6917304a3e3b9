// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include "segt/grid.hpp"
#include "segt/point_cloud.hpp"
#include "segt/voxel_set.hpp"

namespace segt {

struct VoxelizeStats {
    std::size_t dropped = 0;
    std::size_t retained = 0;
};

/// Dynamic voxel feature encoding: every point inside [range_min, range_max)
/// is binned with floor((p - range_min) / voxel_size), and each occupied
/// voxel's feature row is the arithmetic mean of the (x, y, z, extras...)
/// vectors of its points, so channel_count = 3 + extra_count.
///
/// Output rows are sorted ascending by (z, y, x). Means are accumulated
/// left-to-right over points ordered by (voxel, original index), which makes
/// the result bitwise invariant under any permutation of the input points.
/// An empty or fully filtered cloud yields a valid empty set. Non-finite
/// point attributes raise io_error naming the point index.
VoxelSet voxelize(const PointCloud& cloud, const GridSpec& grid, VoxelizeStats* stats = nullptr);

} // namespace segt
