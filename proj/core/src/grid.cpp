// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#include "segt/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "segt/errors.hpp"

namespace segt {

GridSpec GridSpec::create(const std::array<double, 3>& range_min,
                          const std::array<double, 3>& range_max,
                          const std::array<double, 3>& voxel_size) {
    static const char* axis_names[3] = {"x", "y", "z"};
    GridSpec g;
    g.range_min = range_min;
    g.range_max = range_max;
    g.voxel_size = voxel_size;
    for (int a = 0; a < 3; ++a) {
        if (!std::isfinite(range_min[a]) || !std::isfinite(range_max[a]) ||
            !std::isfinite(voxel_size[a])) {
            throw config_error(std::string("grid: non-finite extent on axis ") + axis_names[a]);
        }
        if (!(range_max[a] > range_min[a])) {
            throw config_error(std::string("grid: range_max must exceed range_min on axis ") +
                               axis_names[a]);
        }
        if (!(voxel_size[a] > 0.0)) {
            throw config_error(std::string("grid: voxel_size must be positive on axis ") +
                               axis_names[a]);
        }
        const double extent = (range_max[a] - range_min[a]) / voxel_size[a];
        const double cells = std::ceil(extent);
        if (!(cells >= 1.0) || cells > 4294967295.0) {
            throw config_error(std::string("grid: dim out of range on axis ") + axis_names[a]);
        }
        g.dims[a] = static_cast<std::uint32_t>(cells);
    }
    return g;
}

std::uint32_t GridSpec::max_dim() const {
    return std::max({dims[0], dims[1], dims[2]});
}

} // namespace segt
