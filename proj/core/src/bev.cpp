// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#include "segt/bev.hpp"

namespace segt {

BevGrid bev_scatter(const VoxelSet& voxels) {
    BevGrid bev;
    bev.grid = voxels.grid;
    bev.channels = voxels.channel_count;
    bev.values.assign(static_cast<std::size_t>(voxels.grid.dims[0]) * voxels.grid.dims[1] *
                          voxels.channel_count,
                      0.0);
    for (std::size_t i = 0; i < voxels.size(); ++i) {
        auto dst = bev.cell(voxels.coords[i][0], voxels.coords[i][1]);
        const auto src = voxels.feature_row(i);
        for (std::size_t c = 0; c < voxels.channel_count; ++c) {
            dst[c] += src[c];
        }
    }
    return bev;
}

} // namespace segt
