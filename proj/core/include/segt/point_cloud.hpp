// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace segt {

/// Raw LiDAR returns. Each point is (x, y, z, extras...) stored row-major
/// with a uniform number of extra attributes (intensity, ring, ...).
struct PointCloud {
    std::size_t extra_count = 0;
    std::vector<double> values; // size() * (3 + extra_count), row-major

    std::size_t stride() const { return 3 + extra_count; }
    std::size_t size() const { return values.empty() ? 0 : values.size() / stride(); }

    std::span<const double> point(std::size_t i) const {
        return {values.data() + i * stride(), stride()};
    }

    void append(std::span<const double> attributes) {
        values.insert(values.end(), attributes.begin(), attributes.end());
    }
};

} // namespace segt
