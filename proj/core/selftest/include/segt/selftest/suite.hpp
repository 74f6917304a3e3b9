// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "segt/grid.hpp"
#include "segt/voxel_set.hpp"

namespace segt::selftest {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double ms = 0.0;
};

struct SuiteOptions {
    /// Test hook: deliberately breaks the curve kernel seen by the
    /// bijectivity check so failure reporting can be exercised.
    bool corrupt_curve_kernel = false;
    std::size_t bench_voxels = 100000;
    int bench_repeat = 5;
    unsigned threads = 1;
};

/// Runs every embedded invariant check, invoking on_result (if set) as each
/// one finishes. All pass/fail thresholds are fixed here, not configurable.
std::vector<CheckResult> run_suite(const SuiteOptions& options,
                                   const std::function<void(const CheckResult&)>& on_result = {});

bool all_passed(const std::vector<CheckResult>& results);

/// Seeded voxel set with distinct random coordinates; features uniform in
/// [-1, 1), or uniform integers in [-8, 8] when integer_features is set.
VoxelSet make_random_voxels(std::size_t count, const GridSpec& grid, std::size_t channels,
                            std::uint64_t seed, bool integer_features = false);

} // namespace segt::selftest
