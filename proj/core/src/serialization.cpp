// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#include "segt/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "segt/hilbert.hpp"

namespace segt {

const char* strategy_name(Strategy s) {
    return s == Strategy::Plus ? "+" : "-";
}

void ExpansionConfig::validate() const {
    if (l_glb < 1 || l_glb > hilbert::kMaxLevel) {
        throw config_error("l_glb must be in [1, " + std::to_string(hilbert::kMaxLevel) +
                           "], got " + std::to_string(l_glb));
    }
    if (l_lcl > hilbert::kMaxLevel) {
        throw config_error("l_lcl must be in [0, " + std::to_string(hilbert::kMaxLevel) +
                           "], got " + std::to_string(l_lcl));
    }
}

void ExpansionConfig::validate_covers(const GridSpec& grid) const {
    validate();
    const std::uint32_t extent =
        grid.single_layer() ? std::max(grid.dims[0], grid.dims[1]) : grid.max_dim();
    if (padded_extent() < extent) {
        throw config_error("expansion levels (l_glb=" + std::to_string(l_glb) +
                           ", l_lcl=" + std::to_string(l_lcl) + ") cover only " +
                           std::to_string(padded_extent()) + " cells per axis; grid needs " +
                           std::to_string(extent));
    }
}

unsigned ExpansionConfig::derive_l_lcl(const GridSpec& grid, unsigned l_glb) {
    const std::uint32_t extent =
        grid.single_layer() ? std::max(grid.dims[0], grid.dims[1]) : grid.max_dim();
    unsigned bits = 0;
    while ((std::uint64_t{1} << bits) < extent) {
        ++bits;
    }
    return bits > l_glb ? bits - l_glb : 0;
}

VoxelCoord apply_strategy(const VoxelCoord& coord, Strategy strategy,
                          std::uint64_t padded_extent) {
    if (strategy == Strategy::Plus) {
        return coord;
    }
    return VoxelCoord{static_cast<std::uint32_t>(padded_extent - 1 - coord[1]), coord[0],
                      coord[2]};
}

namespace {

void compute_keys(const VoxelSet& voxels, Strategy strategy, const ExpansionConfig& cfg,
                  unsigned dim, std::size_t begin, std::size_t end,
                  std::vector<std::uint64_t>& global_keys, std::vector<std::uint64_t>& local_keys) {
    const std::uint64_t pad = cfg.padded_extent();
    const std::uint32_t local_mask =
        cfg.l_lcl == 0 ? 0u : static_cast<std::uint32_t>((std::uint64_t{1} << cfg.l_lcl) - 1);
    for (std::size_t i = begin; i < end; ++i) {
        const VoxelCoord c = apply_strategy(voxels.coords[i], strategy, pad);
        std::uint32_t cell[3];
        std::uint32_t offset[3];
        for (unsigned a = 0; a < 3; ++a) {
            cell[a] = c[a] >> cfg.l_lcl;
            offset[a] = c[a] & local_mask;
        }
        global_keys[i] = hilbert::encode({cell, dim}, cfg.l_glb, dim);
        local_keys[i] = hilbert::encode({offset, dim}, cfg.l_lcl, dim);
    }
}

} // namespace

SerializationPlan serialize(const VoxelSet& voxels, Strategy strategy, const ExpansionConfig& cfg,
                            unsigned threads) {
    cfg.validate_covers(voxels.grid);
    const unsigned dim = voxels.grid.single_layer() ? 2 : 3;
    const std::size_t n = voxels.size();

    SerializationPlan plan;
    plan.global_keys.resize(n);
    plan.local_keys.resize(n);

    if (threads <= 1 || n < 4096) {
        compute_keys(voxels, strategy, cfg, dim, 0, n, plan.global_keys, plan.local_keys);
    } else {
        const unsigned hw = std::thread::hardware_concurrency();
        const unsigned worker_count = hw == 0 ? threads : std::min(threads, hw);
        std::vector<std::thread> workers;
        const std::size_t chunk = (n + worker_count - 1) / worker_count;
        for (unsigned t = 0; t < worker_count; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            if (begin >= end) {
                break;
            }
            workers.emplace_back([&, begin, end] {
                compute_keys(voxels, strategy, cfg, dim, begin, end, plan.global_keys,
                             plan.local_keys);
            });
        }
        for (auto& w : workers) {
            w.join();
        }
    }

    plan.order.resize(n);
    std::iota(plan.order.begin(), plan.order.end(), std::size_t{0});
    std::sort(plan.order.begin(), plan.order.end(), [&](std::size_t a, std::size_t b) {
        if (plan.global_keys[a] != plan.global_keys[b]) {
            return plan.global_keys[a] < plan.global_keys[b];
        }
        if (plan.local_keys[a] != plan.local_keys[b]) {
            return plan.local_keys[a] < plan.local_keys[b];
        }
        return a < b; // unreachable for distinct coords; keeps the sort total
    });

    plan.inverse.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        plan.inverse[plan.order[i]] = i;
    }
    return plan;
}

std::vector<VoxelCoord> gather(std::span<const VoxelCoord> coords, const SerializationPlan& plan) {
    if (coords.size() != plan.size()) {
        throw shape_error("gather: coord count does not match plan length");
    }
    std::vector<VoxelCoord> out(coords.size());
    for (std::size_t i = 0; i < plan.size(); ++i) {
        out[i] = coords[plan.order[i]];
    }
    return out;
}

} // namespace segt
