// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "segt/binary_io.hpp"
#include "segt/encoder.hpp"
#include "segt/rng.hpp"
#include "segt/run_config.hpp"

namespace segt {

/// Random: projection weights ~ uniform(-1/sqrt(C), 1/sqrt(C)), biases and
/// norm biases zero, norm gains one. Identity additionally zeroes the
/// residual output projections (w_o and ffn_w2), making encoder_forward the
/// exact identity on features.
enum class InitMode : std::uint8_t { random, identity };

namespace detail {

template <class T, class Fn>
void for_each_tensor(LayerParams<T>& lp, Fn&& fn) {
    // Declared container order; save/load and init all walk this list.
    fn("w_q", lp.attention.w_q);
    fn("b_q", lp.attention.b_q);
    fn("w_k", lp.attention.w_k);
    fn("b_k", lp.attention.b_k);
    fn("w_v", lp.attention.w_v);
    fn("b_v", lp.attention.b_v);
    fn("w_o", lp.attention.w_o);
    fn("b_o", lp.attention.b_o);
    fn("w_pos", lp.attention.w_pos);
    fn("b_pos", lp.attention.b_pos);
    fn("ffn_w1", lp.ffn_w1);
    fn("ffn_b1", lp.ffn_b1);
    fn("ffn_w2", lp.ffn_w2);
    fn("ffn_b2", lp.ffn_b2);
    fn("norm1_gain", lp.norm1_gain);
    fn("norm1_bias", lp.norm1_bias);
    fn("norm2_gain", lp.norm2_gain);
    fn("norm2_bias", lp.norm2_bias);
}

template <class T, class Fn>
void for_each_tensor(const LayerParams<T>& lp, Fn&& fn) {
    for_each_tensor(const_cast<LayerParams<T>&>(lp),
                    [&fn](const char* name, auto& tensor) { fn(name, std::as_const(tensor)); });
}

inline constexpr std::size_t kTensorsPerLayer = 18;

void write_run_config(std::ostream& os, const RunConfig& config);
RunConfig read_run_config(std::istream& is);

template <class T>
void write_tensor_payload(std::ostream& os, const T* data, std::size_t count, Precision precision) {
    for (std::size_t i = 0; i < count; ++i) {
        if (precision == Precision::f32) {
            write_raw(os, static_cast<float>(data[i]));
        } else {
            write_raw(os, static_cast<double>(data[i]));
        }
    }
}

template <class T>
void read_tensor_payload(std::istream& is, T* data, std::size_t count, Precision precision,
                         const char* what) {
    for (std::size_t i = 0; i < count; ++i) {
        if (precision == Precision::f32) {
            data[i] = static_cast<T>(read_raw<float>(is, what));
        } else {
            data[i] = static_cast<T>(read_raw<double>(is, what));
        }
    }
}

} // namespace detail

/// Deterministic parameter generation from config.seed. Draws are consumed
/// only by projection tensors, row-major, layers in order, tensors in
/// declared order; values are computed in f64 then cast to T.
template <class T>
EncoderParams<T> init_params(const RunConfig& config, InitMode mode = InitMode::random) {
    config.validate();
    EncoderParams<T> params;
    params.attention = config.attention_config();
    params.expansion = config.expansion;
    params.layers.reserve(EncoderLayout::total_layers);

    SplitMix64 rng(config.seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(config.channels));
    auto fill_uniform = [&rng, bound](T* data, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) {
            data[i] = static_cast<T>(rng.next_uniform(-bound, bound));
        }
    };

    for (std::size_t layer = 0; layer < EncoderLayout::total_layers; ++layer) {
        LayerParams<T> lp = LayerParams<T>::zeros(config.channels);
        fill_uniform(lp.attention.w_q.data(), lp.attention.w_q.size());
        fill_uniform(lp.attention.w_k.data(), lp.attention.w_k.size());
        fill_uniform(lp.attention.w_v.data(), lp.attention.w_v.size());
        fill_uniform(lp.attention.w_o.data(), lp.attention.w_o.size());
        fill_uniform(lp.attention.w_pos.data(), lp.attention.w_pos.size());
        fill_uniform(lp.ffn_w1.data(), lp.ffn_w1.size());
        fill_uniform(lp.ffn_w2.data(), lp.ffn_w2.size());
        if (mode == InitMode::identity) {
            lp.attention.w_o = Matrix<T>(config.channels, config.channels);
            lp.ffn_w2 = Matrix<T>(4 * config.channels, config.channels);
        }
        params.layers.push_back(std::move(lp));
    }
    return params;
}

/// SEGW weight container: magic "SEGW", u16 version, the run config, a u32
/// tensor count, then every tensor as (u8 rank, u64 shape..., payload) with
/// payload scalars in little-endian f32 or f64 per config.precision.
/// Layers in order, tensors in declared order. Round trips are bitwise
/// exact for matching precision.
template <class T>
void save_params(std::ostream& os, const RunConfig& config, const EncoderParams<T>& params);

template <class T>
EncoderParams<T> load_params(std::istream& is, RunConfig* config_out = nullptr);

/// Reads only the embedded run config (for precision dispatch).
RunConfig read_params_config(std::istream& is);
RunConfig read_params_config_file(const std::string& path);

// --- implementation ---

template <class T>
void save_params(std::ostream& os, const RunConfig& config, const EncoderParams<T>& params) {
    params.validate();
    if (params.attention.channels != config.channels) {
        throw shape_error("save_params: params channels do not match config");
    }
    detail::write_magic(os, "SEGW");
    detail::write_raw(os, std::uint16_t{1});
    detail::write_run_config(os, config);
    detail::write_raw(os,
                      static_cast<std::uint32_t>(EncoderLayout::total_layers *
                                                 detail::kTensorsPerLayer));
    for (const auto& layer : params.layers) {
        detail::for_each_tensor(layer, [&](const char*, const auto& tensor) {
            using Tensor = std::remove_cvref_t<decltype(tensor)>;
            if constexpr (std::is_same_v<Tensor, Matrix<T>>) {
                detail::write_raw(os, std::uint8_t{2});
                detail::write_raw(os, static_cast<std::uint64_t>(tensor.rows()));
                detail::write_raw(os, static_cast<std::uint64_t>(tensor.cols()));
                detail::write_tensor_payload(os, tensor.data(), tensor.size(), config.precision);
            } else {
                detail::write_raw(os, std::uint8_t{1});
                detail::write_raw(os, static_cast<std::uint64_t>(tensor.size()));
                detail::write_tensor_payload(os, tensor.data(), tensor.size(), config.precision);
            }
        });
    }
    if (!os) {
        throw io_error("save_params: write failure");
    }
}

template <class T>
EncoderParams<T> load_params(std::istream& is, RunConfig* config_out) {
    detail::expect_magic(is, "SEGW", "SEGW");
    detail::expect_version(is, 1, "SEGW");
    const RunConfig config = detail::read_run_config(is);
    constexpr bool loading_f64 = std::is_same_v<T, double>;
    if ((config.precision == Precision::f64) != loading_f64) {
        throw config_error(std::string("load_params: file precision is ") +
                           precision_name(config.precision));
    }

    const auto tensor_count = detail::read_raw<std::uint32_t>(is, "tensor count");
    if (tensor_count != EncoderLayout::total_layers * detail::kTensorsPerLayer) {
        throw shape_error("load_params: unexpected tensor count " + std::to_string(tensor_count));
    }

    EncoderParams<T> params;
    params.attention = config.attention_config();
    params.expansion = config.expansion;
    for (std::size_t layer = 0; layer < EncoderLayout::total_layers; ++layer) {
        LayerParams<T> lp = LayerParams<T>::zeros(config.channels);
        detail::for_each_tensor(lp, [&](const char* name, auto& tensor) {
            using Tensor = std::remove_reference_t<decltype(tensor)>;
            const auto rank = detail::read_raw<std::uint8_t>(is, name);
            if constexpr (std::is_same_v<Tensor, Matrix<T>>) {
                if (rank != 2) {
                    throw shape_error(std::string("load_params: tensor ") + name +
                                      " has rank " + std::to_string(rank) + ", expected 2");
                }
                const auto rows = detail::read_raw<std::uint64_t>(is, name);
                const auto cols = detail::read_raw<std::uint64_t>(is, name);
                if (rows != tensor.rows() || cols != tensor.cols()) {
                    throw shape_error(std::string("load_params: tensor ") + name +
                                      " shape mismatch vs config");
                }
                detail::read_tensor_payload(is, tensor.data(), tensor.size(), config.precision,
                                            name);
            } else {
                if (rank != 1) {
                    throw shape_error(std::string("load_params: tensor ") + name +
                                      " has rank " + std::to_string(rank) + ", expected 1");
                }
                const auto len = detail::read_raw<std::uint64_t>(is, name);
                if (len != tensor.size()) {
                    throw shape_error(std::string("load_params: tensor ") + name +
                                      " length mismatch vs config");
                }
                detail::read_tensor_payload(is, tensor.data(), tensor.size(), config.precision,
                                            name);
            }
        });
        params.layers.push_back(std::move(lp));
    }
    if (config_out != nullptr) {
        *config_out = config;
    }
    return params;
}

} // namespace segt
