// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "segt/attention.hpp"
#include "segt/grid.hpp"
#include "segt/matrix.hpp"

namespace segt::selftest {

/// Straight-line dense multi-head self-attention over the whole sequence,
/// written element by element from the definition. Deliberately shares no
/// code with the grouped kernel; it is the oracle the kernel is compared
/// against when the group covers the full sequence.
inline Matrix<double> dense_attention_reference(const Matrix<double>& features,
                                                std::span<const VoxelCoord> coords,
                                                const GridSpec& grid,
                                                const AttentionConfig& cfg,
                                                const AttentionParams<double>& p) {
    const std::size_t n = features.rows();
    const std::size_t c = cfg.channels;
    const std::size_t heads = cfg.heads;
    const std::size_t hd = c / heads;

    // x = features + position embedding of normalized voxel centers
    Matrix<double> x(n, c);
    for (std::size_t i = 0; i < n; ++i) {
        double u[3];
        for (int a = 0; a < 3; ++a) {
            u[a] = (2.0 * coords[i][a] + 1.0) / grid.dims[a] - 1.0;
        }
        for (std::size_t j = 0; j < c; ++j) {
            double e = p.b_pos[j];
            for (int a = 0; a < 3; ++a) {
                e += u[a] * p.w_pos(a, j);
            }
            x(i, j) = features(i, j) + e;
        }
    }

    auto apply = [&](const Matrix<double>& w, const std::vector<double>& b, std::size_t row,
                     std::size_t col) {
        double acc = b[col];
        for (std::size_t k = 0; k < c; ++k) {
            acc += x(row, k) * w(k, col);
        }
        return acc;
    };

    Matrix<double> q(n, c), k(n, c), v(n, c);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            q(i, j) = apply(p.w_q, p.b_q, i, j);
            k(i, j) = apply(p.w_k, p.b_k, i, j);
            v(i, j) = apply(p.w_v, p.b_v, i, j);
        }
    }

    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(hd));
    Matrix<double> concat(n, c);
    std::vector<double> weights(n);
    for (std::size_t h = 0; h < heads; ++h) {
        const std::size_t c0 = h * hd;
        for (std::size_t i = 0; i < n; ++i) {
            double max_logit = -HUGE_VAL;
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t d = 0; d < hd; ++d) {
                    s += q(i, c0 + d) * k(j, c0 + d);
                }
                weights[j] = s * inv_sqrt;
                if (weights[j] > max_logit) {
                    max_logit = weights[j];
                }
            }
            double z = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                weights[j] = std::exp(weights[j] - max_logit);
                z += weights[j];
            }
            for (std::size_t d = 0; d < hd; ++d) {
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    acc += (weights[j] / z) * v(j, c0 + d);
                }
                concat(i, c0 + d) = acc;
            }
        }
    }

    Matrix<double> out(n, c);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            double acc = p.b_o[j];
            for (std::size_t kk = 0; kk < c; ++kk) {
                acc += concat(i, kk) * p.w_o(kk, j);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

} // namespace segt::selftest
