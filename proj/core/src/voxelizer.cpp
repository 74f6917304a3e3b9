// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#include "segt/voxelizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "segt/errors.hpp"

namespace segt {

namespace {

struct BinnedPoint {
    VoxelCoord voxel;
    std::size_t point;
};

// Sort key (z, y, x), ties broken by original point index so the mean's
// accumulation order is independent of input order.
bool binned_less(const BinnedPoint& a, const BinnedPoint& b) {
    if (a.voxel[2] != b.voxel[2]) return a.voxel[2] < b.voxel[2];
    if (a.voxel[1] != b.voxel[1]) return a.voxel[1] < b.voxel[1];
    if (a.voxel[0] != b.voxel[0]) return a.voxel[0] < b.voxel[0];
    return a.point < b.point;
}

} // namespace

VoxelSet voxelize(const PointCloud& cloud, const GridSpec& grid, VoxelizeStats* stats) {
    const std::size_t stride = cloud.stride();
    const std::size_t channels = stride;

    std::vector<BinnedPoint> binned;
    binned.reserve(cloud.size());
    std::size_t dropped = 0;

    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto p = cloud.point(i);
        for (std::size_t a = 0; a < stride; ++a) {
            if (!std::isfinite(p[a])) {
                throw io_error("voxelize: non-finite attribute " + std::to_string(a) +
                               " at point " + std::to_string(i));
            }
        }
        bool inside = true;
        VoxelCoord v{};
        for (int a = 0; a < 3; ++a) {
            if (!(p[a] >= grid.range_min[a] && p[a] < grid.range_max[a])) {
                inside = false;
                break;
            }
            auto cell = static_cast<std::int64_t>(
                std::floor((p[a] - grid.range_min[a]) / grid.voxel_size[a]));
            // Rounding guard: a point just under range_max may bin one past
            // the last cell.
            if (cell >= grid.dims[a]) {
                cell = grid.dims[a] - 1;
            }
            if (cell < 0) {
                cell = 0;
            }
            v[a] = static_cast<std::uint32_t>(cell);
        }
        if (!inside) {
            ++dropped;
            continue;
        }
        binned.push_back(BinnedPoint{v, i});
    }

    std::sort(binned.begin(), binned.end(), binned_less);

    VoxelSet out;
    out.grid = grid;
    out.channel_count = channels;

    std::size_t i = 0;
    while (i < binned.size()) {
        std::size_t j = i;
        while (j < binned.size() && binned[j].voxel == binned[i].voxel) {
            ++j;
        }
        std::vector<double> sum(channels, 0.0);
        for (std::size_t k = i; k < j; ++k) {
            const auto p = cloud.point(binned[k].point);
            for (std::size_t c = 0; c < channels; ++c) {
                sum[c] += p[c];
            }
        }
        const auto count = static_cast<double>(j - i);
        out.coords.push_back(binned[i].voxel);
        for (std::size_t c = 0; c < channels; ++c) {
            out.features.push_back(sum[c] / count);
        }
        i = j;
    }

    if (stats != nullptr) {
        stats->dropped = dropped;
        stats->retained = binned.size();
    }
    return out;
}

} // namespace segt
