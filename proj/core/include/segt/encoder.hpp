// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <vector>

#include "segt/attention.hpp"
#include "segt/matrix.hpp"
#include "segt/serialization.hpp"
#include "segt/voxel_set.hpp"

namespace segt {

inline constexpr double kLayerNormEpsilon = 1e-5;

/// One encoder layer: attention block plus a pre-norm residual MLP
/// (channels -> 4*channels, GELU, back to channels).
template <class T>
struct LayerParams {
    AttentionParams<T> attention;
    Matrix<T> ffn_w1;            // C x 4C
    std::vector<T> ffn_b1;       // 4C
    Matrix<T> ffn_w2;            // 4C x C
    std::vector<T> ffn_b2;       // C
    std::vector<T> norm1_gain, norm1_bias; // C
    std::vector<T> norm2_gain, norm2_bias; // C

    static LayerParams zeros(std::size_t channels) {
        LayerParams lp;
        lp.attention = AttentionParams<T>::zeros(channels);
        lp.ffn_w1 = Matrix<T>(channels, 4 * channels);
        lp.ffn_b1.assign(4 * channels, T{});
        lp.ffn_w2 = Matrix<T>(4 * channels, channels);
        lp.ffn_b2.assign(channels, T{});
        lp.norm1_gain.assign(channels, T{1});
        lp.norm1_bias.assign(channels, T{});
        lp.norm2_gain.assign(channels, T{1});
        lp.norm2_bias.assign(channels, T{});
        return lp;
    }
};

/// Fixed backbone layout: 4 stages of 2 blocks of 2 conjugate layers.
/// Within every block the first layer serializes with Plus and the second
/// with Minus; channels stay constant across the stack.
struct EncoderLayout {
    static constexpr std::size_t stages = 4;
    static constexpr std::size_t blocks_per_stage = 2;
    static constexpr std::size_t layers_per_block = 2;
    static constexpr std::size_t total_layers = stages * blocks_per_stage * layers_per_block;

    static Strategy strategy_for(std::size_t layer_index) {
        return layer_index % 2 == 0 ? Strategy::Plus : Strategy::Minus;
    }
    static std::size_t stage_of(std::size_t layer_index) {
        return layer_index / (blocks_per_stage * layers_per_block);
    }
};

template <class T>
struct EncoderParams {
    AttentionConfig attention;
    ExpansionConfig expansion;
    std::vector<LayerParams<T>> layers; // EncoderLayout::total_layers

    void validate() const {
        attention.validate();
        expansion.validate();
        if (layers.size() != EncoderLayout::total_layers) {
            throw shape_error("encoder: expected " + std::to_string(EncoderLayout::total_layers) +
                              " layers, got " + std::to_string(layers.size()));
        }
    }
};

struct StageTimings {
    std::array<double, EncoderLayout::stages> stage_ms{};
    double total_ms = 0.0;
};

namespace detail {

template <class T>
Matrix<T> layer_norm_rows(const Matrix<T>& x, const std::vector<T>& gain,
                          const std::vector<T>& bias) {
    Matrix<T> out(x.rows(), x.cols());
    const auto c = static_cast<T>(x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const T* row = x.row_data(i);
        T mean{};
        for (std::size_t j = 0; j < x.cols(); ++j) {
            mean += row[j];
        }
        mean /= c;
        T var{};
        for (std::size_t j = 0; j < x.cols(); ++j) {
            const T d = row[j] - mean;
            var += d * d;
        }
        var /= c;
        const T inv = T{1} / std::sqrt(var + static_cast<T>(kLayerNormEpsilon));
        T* dst = out.row_data(i);
        for (std::size_t j = 0; j < x.cols(); ++j) {
            dst[j] = (row[j] - mean) * inv * gain[j] + bias[j];
        }
    }
    return out;
}

template <class T>
T gelu(T v) {
    return T{0.5} * v * (T{1} + std::erf(v * static_cast<T>(0.7071067811865476)));
}

template <class T>
Matrix<T> feed_forward(const Matrix<T>& x, const LayerParams<T>& lp) {
    Matrix<T> hidden = matmul(x, lp.ffn_w1);
    add_row_vector(hidden, std::span<const T>{lp.ffn_b1});
    for (std::size_t i = 0; i < hidden.size(); ++i) {
        hidden.data()[i] = gelu(hidden.data()[i]);
    }
    Matrix<T> out = matmul(hidden, lp.ffn_w2);
    add_row_vector(out, std::span<const T>{lp.ffn_b2});
    return out;
}

template <class T>
Matrix<T> features_to_matrix(const VoxelSet& voxels) {
    Matrix<T> m(voxels.size(), voxels.channel_count);
    for (std::size_t i = 0; i < m.size(); ++i) {
        m.data()[i] = static_cast<T>(voxels.features[i]);
    }
    return m;
}

template <class T>
std::vector<double> matrix_to_features(const Matrix<T>& m) {
    std::vector<double> out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        out[i] = static_cast<double>(m.data()[i]);
    }
    return out;
}

/// Core of one layer, operating on features already lifted to scalar T.
template <class T>
Matrix<T> segt_layer_features(const Matrix<T>& features, const VoxelSet& voxels,
                              Strategy strategy, const LayerParams<T>& lp,
                              const AttentionConfig& acfg, const ExpansionConfig& ecfg,
                              unsigned threads) {
    const SerializationPlan plan = serialize(voxels, strategy, ecfg, threads);
    Matrix<T> f_z = gather(features, plan);
    const std::vector<VoxelCoord> coords_z =
        gather(std::span<const VoxelCoord>{voxels.coords}, plan);

    Matrix<T> attn_in = layer_norm_rows(f_z, lp.norm1_gain, lp.norm1_bias);
    Matrix<T> attn_out =
        group_attention_forward(attn_in, std::span<const VoxelCoord>{coords_z}, voxels.grid,
                                acfg, lp.attention);
    add_inplace(f_z, attn_out); // residual

    Matrix<T> ffn_in = layer_norm_rows(f_z, lp.norm2_gain, lp.norm2_bias);
    Matrix<T> ffn_out = feed_forward(ffn_in, lp);
    add_inplace(f_z, ffn_out); // residual

    return scatter(f_z, plan);
}

} // namespace detail

/// One SEGT layer: serialize, gather, pre-norm attention and MLP residual
/// blocks, inverse scatter. Coordinates are unchanged.
template <class T>
VoxelSet segt_layer(const VoxelSet& voxels, Strategy strategy, const LayerParams<T>& lp,
                    const AttentionConfig& acfg, const ExpansionConfig& ecfg,
                    unsigned threads = 1) {
    Matrix<T> features = detail::features_to_matrix<T>(voxels);
    Matrix<T> out =
        detail::segt_layer_features(features, voxels, strategy, lp, acfg, ecfg, threads);
    VoxelSet result = voxels;
    result.features = detail::matrix_to_features(out);
    return result;
}

/// Full encoder: all layers applied in sequence with the per-block
/// Plus/Minus schedule. Feature math runs in scalar T; coordinates and row
/// order are preserved exactly.
template <class T>
VoxelSet encoder_forward(const VoxelSet& voxels, const EncoderParams<T>& params,
                         StageTimings* timings = nullptr, unsigned threads = 1) {
    params.validate();
    if (voxels.channel_count != params.attention.channels) {
        throw shape_error("encoder: voxel channels " + std::to_string(voxels.channel_count) +
                          " do not match configured channels " +
                          std::to_string(params.attention.channels));
    }
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    auto stage_start = start;

    Matrix<T> features = detail::features_to_matrix<T>(voxels);
    for (std::size_t layer = 0; layer < EncoderLayout::total_layers; ++layer) {
        features = detail::segt_layer_features(features, voxels, EncoderLayout::strategy_for(layer),
                                               params.layers[layer], params.attention,
                                               params.expansion, threads);
        if (timings != nullptr && (layer + 1) % (EncoderLayout::blocks_per_stage *
                                                 EncoderLayout::layers_per_block) == 0) {
            const auto now = clock::now();
            timings->stage_ms[EncoderLayout::stage_of(layer)] =
                std::chrono::duration<double, std::milli>(now - stage_start).count();
            stage_start = now;
        }
    }

    VoxelSet result = voxels;
    result.features = detail::matrix_to_features(features);
    if (timings != nullptr) {
        timings->total_ms =
            std::chrono::duration<double, std::milli>(clock::now() - start).count();
    }
    return result;
}

} // namespace segt
