// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "segt/errors.hpp"
#include "segt/grid.hpp"
#include "segt/matrix.hpp"
#include "segt/voxel_set.hpp"

namespace segt {

/// The two conjugate expansion strategies. Plus orders voxels along the
/// Hilbert curve in the native frame; Minus first rotates the XY frame by
/// 90 degrees (axis swap plus reflection) so every voxel lands in a
/// different curve neighborhood.
enum class Strategy : std::uint8_t { Plus, Minus };

const char* strategy_name(Strategy s);

/// Two-level curve configuration: l_glb bits order coarse cells, l_lcl bits
/// order voxels inside each cell. The curve covers the grid when
/// 2^(l_glb + l_lcl) >= max serialized grid dimension.
struct ExpansionConfig {
    unsigned l_glb = 6;
    unsigned l_lcl = 3;

    void validate() const;
    void validate_covers(const GridSpec& grid) const;

    std::uint64_t padded_extent() const { return std::uint64_t{1} << (l_glb + l_lcl); }

    /// Smallest l_lcl such that the two-level curve covers the grid at the
    /// given l_glb.
    static unsigned derive_l_lcl(const GridSpec& grid, unsigned l_glb);
};

/// Frame transform realizing the chosen strategy over the padded cube of
/// side padded_extent. Plus is the identity; Minus maps
/// (x, y, z) -> (padded_extent - 1 - y, x, z).
VoxelCoord apply_strategy(const VoxelCoord& coord, Strategy strategy, std::uint64_t padded_extent);

/// A bijective voxel ordering: order[i] is the original row of the i-th
/// voxel in serialized order, inverse is its inverse permutation, and
/// (global_keys, local_keys) are the per-row sort keys (indexed by original
/// row).
struct SerializationPlan {
    std::vector<std::uint64_t> global_keys;
    std::vector<std::uint64_t> local_keys;
    std::vector<std::size_t> order;
    std::vector<std::size_t> inverse;

    std::size_t size() const { return order.size(); }
};

/// Builds the serialized ordering of a voxel set under the given strategy:
/// coordinates are frame-transformed, split into (global cell, local offset)
/// at l_lcl bits, keyed by (Hilbert(global, l_glb), Hilbert(local, l_lcl)),
/// and argsorted lexicographically. The curve runs in 2D over (x, y) for
/// single-layer grids and in 3D otherwise. Keys are distinct for distinct
/// coordinates, so the order is unique. threads > 1 parallelizes key
/// computation only; the result is bitwise identical to threads == 1.
SerializationPlan serialize(const VoxelSet& voxels, Strategy strategy, const ExpansionConfig& cfg,
                            unsigned threads = 1);

/// Row permutations between the native and serialized orders.
/// gather: out[i] = in[plan.order[i]]; scatter: out[plan.order[i]] = in[i].
/// scatter(gather(m)) == m bitwise.
template <class T>
Matrix<T> gather(const Matrix<T>& rows, const SerializationPlan& plan) {
    if (rows.rows() != plan.size()) {
        throw shape_error("gather: row count does not match plan length");
    }
    Matrix<T> out(rows.rows(), rows.cols());
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const T* src = rows.row_data(plan.order[i]);
        T* dst = out.row_data(i);
        for (std::size_t j = 0; j < rows.cols(); ++j) {
            dst[j] = src[j];
        }
    }
    return out;
}

template <class T>
Matrix<T> scatter(const Matrix<T>& rows, const SerializationPlan& plan) {
    if (rows.rows() != plan.size()) {
        throw shape_error("scatter: row count does not match plan length");
    }
    Matrix<T> out(rows.rows(), rows.cols());
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const T* src = rows.row_data(i);
        T* dst = out.row_data(plan.order[i]);
        for (std::size_t j = 0; j < rows.cols(); ++j) {
            dst[j] = src[j];
        }
    }
    return out;
}

std::vector<VoxelCoord> gather(std::span<const VoxelCoord> coords, const SerializationPlan& plan);

} // namespace segt
