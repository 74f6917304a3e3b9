// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#include "segt/inspect.hpp"

#include <cstdio>
#include <ostream>

#include "segt/errors.hpp"
#include "segt/hilbert.hpp"

namespace segt {

void write_curve_csv(std::ostream& os, unsigned level, unsigned dim) {
    if (dim != 2 && dim != 3) {
        throw config_error("curve dump: dims must be 2 or 3");
    }
    os << "index,x,y,z\n";
    const std::uint64_t count = std::uint64_t{1} << (static_cast<std::uint64_t>(dim) * level);
    std::uint32_t c[3] = {0, 0, 0};
    char buf[96];
    for (std::uint64_t i = 0; i < count; ++i) {
        hilbert::decode(i, level, dim, {c, dim});
        std::snprintf(buf, sizeof(buf), "%llu,%u,%u,%u\n", static_cast<unsigned long long>(i),
                      c[0], c[1], dim == 3 ? c[2] : 0u);
        os << buf;
        c[2] = 0;
    }
}

void write_curve_svg(std::ostream& os, unsigned level) {
    const std::uint64_t side = std::uint64_t{1} << level;
    const std::uint64_t count = side * side;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << side << ' ' << side
       << "\">\n";
    os << "  <polyline fill=\"none\" stroke=\"black\" stroke-width=\"0.08\" points=\"";
    std::uint32_t c[2] = {0, 0};
    char buf[64];
    for (std::uint64_t i = 0; i < count; ++i) {
        hilbert::decode(i, level, 2, {c, 2});
        std::snprintf(buf, sizeof(buf), "%s%u.5,%u.5", i == 0 ? "" : " ", c[0], c[1]);
        os << buf;
    }
    os << "\"/>\n</svg>\n";
}

void write_plan_csv(std::ostream& os, const VoxelSet& voxels, const SerializationPlan& plan) {
    os << "rank,voxel_row,global_key,local_key,x,y,z\n";
    char buf[160];
    for (std::size_t rank = 0; rank < plan.size(); ++rank) {
        const std::size_t row = plan.order[rank];
        const VoxelCoord& c = voxels.coords[row];
        std::snprintf(buf, sizeof(buf), "%zu,%zu,%llu,%llu,%u,%u,%u\n", rank, row,
                      static_cast<unsigned long long>(plan.global_keys[row]),
                      static_cast<unsigned long long>(plan.local_keys[row]), c[0], c[1], c[2]);
        os << buf;
    }
}

} // namespace segt
