// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "segt/errors.hpp"
#include "segt/grid.hpp"
#include "segt/matrix.hpp"

namespace segt {

/// Channel/head/group geometry of the attention kernel.
struct AttentionConfig {
    std::size_t channels = 128;
    std::size_t heads = 8;
    std::size_t group_size = 128;

    std::size_t head_dim() const { return channels / heads; }

    void validate() const {
        if (channels == 0 || heads == 0 || channels % heads != 0) {
            throw config_error("attention: heads must divide channels (channels=" +
                               std::to_string(channels) + ", heads=" + std::to_string(heads) + ")");
        }
        if (group_size == 0) {
            throw config_error("attention: group_size must be >= 1");
        }
    }
};

/// Learnable weights of one attention block, including the coordinate
/// position embedding (w_pos, b_pos).
template <class T>
struct AttentionParams {
    Matrix<T> w_q, w_k, w_v, w_o;      // channels x channels
    std::vector<T> b_q, b_k, b_v, b_o; // channels
    Matrix<T> w_pos;                   // 3 x channels
    std::vector<T> b_pos;              // channels

    static AttentionParams zeros(std::size_t channels) {
        AttentionParams p;
        p.w_q = Matrix<T>(channels, channels);
        p.w_k = Matrix<T>(channels, channels);
        p.w_v = Matrix<T>(channels, channels);
        p.w_o = Matrix<T>(channels, channels);
        p.b_q.assign(channels, T{});
        p.b_k.assign(channels, T{});
        p.b_v.assign(channels, T{});
        p.b_o.assign(channels, T{});
        p.w_pos = Matrix<T>(3, channels);
        p.b_pos.assign(channels, T{});
        return p;
    }
};

/// Partition of N rows into consecutive groups of group_size. Padding is
/// always a row suffix of the last group, so the validity mask reduces to a
/// per-group valid count.
struct GroupBatch {
    std::size_t total_rows = 0;
    std::size_t group_size = 1;

    GroupBatch() = default;
    GroupBatch(std::size_t rows, std::size_t group) : total_rows(rows), group_size(group) {}

    std::size_t group_count() const { return (total_rows + group_size - 1) / group_size; }
    std::size_t begin(std::size_t g) const { return g * group_size; }
    std::size_t valid_rows(std::size_t g) const {
        const std::size_t b = begin(g);
        return total_rows - b < group_size ? total_rows - b : group_size;
    }
};

/// Voxel centers mapped per axis to [-1, 1]: (2c + 1) / dims - 1.
template <class T>
Matrix<T> normalized_centers(std::span<const VoxelCoord> coords, const GridSpec& grid) {
    Matrix<T> out(coords.size(), 3);
    for (std::size_t i = 0; i < coords.size(); ++i) {
        for (int a = 0; a < 3; ++a) {
            out(i, a) = static_cast<T>(2 * static_cast<double>(coords[i][a]) + 1.0) /
                            static_cast<T>(grid.dims[a]) -
                        T{1};
        }
    }
    return out;
}

/// Position embedding rows: normalize(coord) * w_pos + b_pos.
template <class T>
Matrix<T> embed_positions(std::span<const VoxelCoord> coords, const GridSpec& grid,
                          const AttentionParams<T>& params) {
    Matrix<T> e = matmul(normalized_centers<T>(coords, grid), params.w_pos);
    add_row_vector(e, std::span<const T>{params.b_pos});
    return e;
}

/// Intermediates of a forward pass, sufficient to run the exact backward
/// pass without recomputation.
template <class T>
struct AttentionCache {
    AttentionConfig cfg;
    AttentionParams<T> params;
    Matrix<T> ncoords;            // N x 3
    Matrix<T> x;                  // N x C, features + position embedding
    Matrix<T> q, k, v;            // N x C
    std::vector<Matrix<T>> probs; // per (group, head): valid x valid softmax rows
    Matrix<T> attn;               // N x C, concatenated head outputs before w_o
};

template <class T>
struct AttentionGrads {
    AttentionParams<T> params;
    Matrix<T> features; // d loss / d input features, N x C
};

namespace detail {

template <class T>
void check_finite(const Matrix<T>& features) {
    for (std::size_t i = 0; i < features.rows(); ++i) {
        const T* row = features.row_data(i);
        for (std::size_t j = 0; j < features.cols(); ++j) {
            if (!std::isfinite(static_cast<double>(row[j]))) {
                throw numeric_error("attention: non-finite input feature at row " +
                                    std::to_string(i) + ", channel " + std::to_string(j));
            }
        }
    }
}

template <class T>
Matrix<T> project(const Matrix<T>& x, const Matrix<T>& w, const std::vector<T>& b) {
    Matrix<T> out = matmul(x, w);
    add_row_vector(out, std::span<const T>{b});
    return out;
}

} // namespace detail

/// Multi-head self-attention restricted to consecutive groups of
/// cfg.group_size rows of the serialized sequence. Rows must already be in
/// serialized order. No token attends across a group boundary. The final
/// (partial) group is handled by masking, equivalent to -inf logits on
/// padding columns. Softmax subtracts the row max before exponentiation.
template <class T>
Matrix<T> group_attention_forward(const Matrix<T>& features, std::span<const VoxelCoord> coords,
                                  const GridSpec& grid, const AttentionConfig& cfg,
                                  const AttentionParams<T>& params,
                                  AttentionCache<T>* cache = nullptr) {
    cfg.validate();
    if (features.cols() != cfg.channels) {
        throw shape_error("attention: feature channels " + std::to_string(features.cols()) +
                          " do not match config channels " + std::to_string(cfg.channels));
    }
    if (coords.size() != features.rows()) {
        throw shape_error("attention: coord count does not match feature rows");
    }
    detail::check_finite(features);

    const std::size_t n = features.rows();
    const std::size_t c = cfg.channels;
    const std::size_t h = cfg.heads;
    const std::size_t hd = cfg.head_dim();
    const T scale = T{1} / static_cast<T>(std::sqrt(static_cast<double>(hd)));

    Matrix<T> ncoords = normalized_centers<T>(coords, grid);
    Matrix<T> x = features;
    {
        Matrix<T> embed = matmul(ncoords, params.w_pos);
        add_row_vector(embed, std::span<const T>{params.b_pos});
        add_inplace(x, embed);
    }

    Matrix<T> q = detail::project(x, params.w_q, params.b_q);
    Matrix<T> k = detail::project(x, params.w_k, params.b_k);
    Matrix<T> v = detail::project(x, params.w_v, params.b_v);

    const GroupBatch batch(n, cfg.group_size);
    Matrix<T> attn(n, c);
    std::vector<Matrix<T>> probs;
    if (cache != nullptr) {
        probs.reserve(batch.group_count() * h);
    }

    std::vector<T> logits;
    for (std::size_t g = 0; g < batch.group_count(); ++g) {
        const std::size_t base = batch.begin(g);
        const std::size_t rows = batch.valid_rows(g);
        for (std::size_t head = 0; head < h; ++head) {
            const std::size_t col0 = head * hd;
            Matrix<T> p(rows, rows);
            for (std::size_t i = 0; i < rows; ++i) {
                logits.assign(rows, T{});
                const T* qi = q.row_data(base + i) + col0;
                T max_logit = -std::numeric_limits<T>::infinity();
                for (std::size_t j = 0; j < rows; ++j) {
                    const T* kj = k.row_data(base + j) + col0;
                    T acc{};
                    for (std::size_t d = 0; d < hd; ++d) {
                        acc += qi[d] * kj[d];
                    }
                    acc *= scale;
                    logits[j] = acc;
                    if (acc > max_logit) {
                        max_logit = acc;
                    }
                }
                T denom{};
                for (std::size_t j = 0; j < rows; ++j) {
                    const T e = std::exp(logits[j] - max_logit);
                    p(i, j) = e;
                    denom += e;
                }
                const T inv = T{1} / denom;
                T* prow = p.row_data(i);
                T* arow = attn.row_data(base + i) + col0;
                for (std::size_t j = 0; j < rows; ++j) {
                    prow[j] *= inv;
                }
                for (std::size_t j = 0; j < rows; ++j) {
                    const T w = prow[j];
                    const T* vj = v.row_data(base + j) + col0;
                    for (std::size_t d = 0; d < hd; ++d) {
                        arow[d] += w * vj[d];
                    }
                }
            }
            if (cache != nullptr) {
                probs.push_back(std::move(p));
            }
        }
    }

    Matrix<T> out = detail::project(attn, params.w_o, params.b_o);

    if (cache != nullptr) {
        cache->cfg = cfg;
        cache->params = params;
        cache->ncoords = std::move(ncoords);
        cache->x = std::move(x);
        cache->q = std::move(q);
        cache->k = std::move(k);
        cache->v = std::move(v);
        cache->probs = std::move(probs);
        cache->attn = std::move(attn);
    }
    return out;
}

/// Exact gradients of a scalar loss with respect to the input features and
/// every parameter, given the upstream gradient d loss / d output. Rows
/// beyond a group's valid count do not exist in this formulation, so
/// padding contributes zero gradient by construction.
template <class T>
AttentionGrads<T> group_attention_backward(const AttentionCache<T>& cache,
                                           const Matrix<T>& upstream) {
    const AttentionConfig& cfg = cache.cfg;
    const std::size_t n = cache.x.rows();
    const std::size_t c = cfg.channels;
    const std::size_t h = cfg.heads;
    const std::size_t hd = cfg.head_dim();
    const T scale = T{1} / static_cast<T>(std::sqrt(static_cast<double>(hd)));

    if (upstream.rows() != n || upstream.cols() != c) {
        throw shape_error("attention backward: upstream gradient shape does not match cache");
    }

    AttentionGrads<T> grads;
    grads.params = AttentionParams<T>::zeros(c);

    // Output projection.
    Matrix<T> d_attn = matmul_bt(upstream, cache.params.w_o);
    grads.params.w_o = matmul_at(cache.attn, upstream);
    grads.params.b_o = column_sums(upstream);

    Matrix<T> dq(n, c), dk(n, c), dv(n, c);
    const GroupBatch batch(n, cfg.group_size);

    std::vector<T> dp(cfg.group_size);
    std::vector<T> ds(cfg.group_size);
    for (std::size_t g = 0; g < batch.group_count(); ++g) {
        const std::size_t base = batch.begin(g);
        const std::size_t rows = batch.valid_rows(g);
        for (std::size_t head = 0; head < h; ++head) {
            const std::size_t col0 = head * hd;
            const Matrix<T>& p = cache.probs[g * h + head];
            for (std::size_t i = 0; i < rows; ++i) {
                const T* da_row = d_attn.row_data(base + i) + col0;
                const T* p_row = p.row_data(i);
                // dP = dA V^T, dV += P^T dA, per query row.
                T dot{};
                for (std::size_t j = 0; j < rows; ++j) {
                    const T* vj = cache.v.row_data(base + j) + col0;
                    T acc{};
                    for (std::size_t d = 0; d < hd; ++d) {
                        acc += da_row[d] * vj[d];
                    }
                    dp[j] = acc;
                    dot += acc * p_row[j];
                    T* dvj = dv.row_data(base + j) + col0;
                    const T w = p_row[j];
                    for (std::size_t d = 0; d < hd; ++d) {
                        dvj[d] += w * da_row[d];
                    }
                }
                // Softmax backward, then dQ/dK through the scaled scores.
                for (std::size_t j = 0; j < rows; ++j) {
                    ds[j] = p_row[j] * (dp[j] - dot) * scale;
                }
                T* dqi = dq.row_data(base + i) + col0;
                const T* qi = cache.q.row_data(base + i) + col0;
                for (std::size_t j = 0; j < rows; ++j) {
                    const T* kj = cache.k.row_data(base + j) + col0;
                    T* dkj = dk.row_data(base + j) + col0;
                    const T s = ds[j];
                    for (std::size_t d = 0; d < hd; ++d) {
                        dqi[d] += s * kj[d];
                        dkj[d] += s * qi[d];
                    }
                }
            }
        }
    }

    // Input projections.
    grads.params.w_q = matmul_at(cache.x, dq);
    grads.params.b_q = column_sums(dq);
    grads.params.w_k = matmul_at(cache.x, dk);
    grads.params.b_k = column_sums(dk);
    grads.params.w_v = matmul_at(cache.x, dv);
    grads.params.b_v = column_sums(dv);

    Matrix<T> dx = matmul_bt(dq, cache.params.w_q);
    add_inplace(dx, matmul_bt(dk, cache.params.w_k));
    add_inplace(dx, matmul_bt(dv, cache.params.w_v));

    // Position embedding receives the same upstream as the features.
    grads.params.w_pos = matmul_at(cache.ncoords, dx);
    grads.params.b_pos = column_sums(dx);
    grads.features = std::move(dx);
    return grads;
}

} // namespace segt
