// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <array>
#include <cmath>
#include <cstring>
#include <limits>
#include <set>
#include <vector>

#include "segt/attention.hpp"
#include "segt/errors.hpp"
#include "segt/rng.hpp"
#include "segt/selftest/gradcheck.hpp"
#include "segt/selftest/reference_attention.hpp"
#include "segt/selftest/suite.hpp"

using namespace segt;

namespace {

AttentionParams<double> seeded_params(std::size_t channels, std::uint64_t seed) {
    AttentionParams<double> p = AttentionParams<double>::zeros(channels);
    SplitMix64 rng(seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(channels));
    auto fill = [&](double* data, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) {
            data[i] = rng.next_uniform(-bound, bound);
        }
    };
    fill(p.w_q.data(), p.w_q.size());
    fill(p.b_q.data(), p.b_q.size());
    fill(p.w_k.data(), p.w_k.size());
    fill(p.b_k.data(), p.b_k.size());
    fill(p.w_v.data(), p.w_v.size());
    fill(p.b_v.data(), p.b_v.size());
    fill(p.w_o.data(), p.w_o.size());
    fill(p.b_o.data(), p.b_o.size());
    fill(p.w_pos.data(), p.w_pos.size());
    fill(p.b_pos.data(), p.b_pos.size());
    return p;
}

Matrix<double> to_matrix(const VoxelSet& v) {
    Matrix<double> m(v.size(), v.channel_count);
    std::memcpy(m.data(), v.features.data(), m.size() * sizeof(double));
    return m;
}

std::span<const VoxelCoord> coord_span(const VoxelSet& v) {
    return {v.coords.data(), v.coords.size()};
}

} // namespace

TEST_CASE("embed_positions: zero map gives the zero matrix") {
    const GridSpec grid = GridSpec::create({0, 0, 0}, {4, 4, 1}, {1, 1, 1});
    const AttentionParams<double> p = AttentionParams<double>::zeros(8);
    const std::vector<VoxelCoord> coords = {{0, 0, 0}, {3, 2, 0}};
    const Matrix<double> e = embed_positions<double>({coords.data(), coords.size()}, grid, p);
    for (std::size_t i = 0; i < e.size(); ++i) {
        CHECK(e.data()[i] == 0.0);
    }
}

TEST_CASE("embed_positions: voxel centers normalize to [-1, 1]") {
    const GridSpec grid = GridSpec::create({0, 0, 0}, {4, 4, 1}, {1, 1, 1});
    const std::vector<VoxelCoord> coords = {{0, 0, 0}};
    const Matrix<double> n = normalized_centers<double>({coords.data(), 1}, grid);
    CHECK(n(0, 0) == doctest::Approx(-0.75).epsilon(1e-15));
    CHECK(n(0, 1) == doctest::Approx(-0.75).epsilon(1e-15));
    CHECK(n(0, 2) == doctest::Approx(0.0).epsilon(1e-15));

    // With w_pos = I on the first three channels, the embedding row carries
    // the normalized coordinates plus the bias.
    AttentionParams<double> p = AttentionParams<double>::zeros(4);
    p.w_pos(0, 0) = 1.0;
    p.w_pos(1, 1) = 1.0;
    p.w_pos(2, 2) = 1.0;
    p.b_pos = {0.5, 0.5, 0.5, 0.5};
    const Matrix<double> e = embed_positions<double>({coords.data(), 1}, grid, p);
    CHECK(e(0, 0) == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(e(0, 1) == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(e(0, 2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(e(0, 3) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("embed_positions: rank-3 w_pos separates distinct coordinates") {
    const GridSpec grid = GridSpec::create({0, 0, 0}, {16, 16, 4}, {1, 1, 1});
    const VoxelSet v = selftest::make_random_voxels(100, grid, 4, 0xe0);
    AttentionParams<double> p = AttentionParams<double>::zeros(4);
    p.w_pos(0, 0) = 1.0; // rank 3 on the occupied axes
    p.w_pos(1, 1) = 1.0;
    p.w_pos(2, 2) = 1.0;
    const Matrix<double> e = embed_positions<double>(coord_span(v), grid, p);
    std::set<std::array<double, 4>> rows;
    for (std::size_t i = 0; i < e.rows(); ++i) {
        REQUIRE(rows.insert({e(i, 0), e(i, 1), e(i, 2), e(i, 3)}).second);
    }
}

TEST_CASE("single token: softmax collapses and the value path remains") {
    const GridSpec grid = GridSpec::create({0, 0, 0}, {4, 4, 1}, {1, 1, 1});
    const AttentionConfig cfg{4, 2, 7};
    AttentionParams<double> p = seeded_params(4, 0x51);
    const std::vector<VoxelCoord> coords = {{1, 2, 0}};
    Matrix<double> f(1, 4);
    f(0, 0) = 0.3; f(0, 1) = -0.7; f(0, 2) = 1.1; f(0, 3) = 0.05;

    const Matrix<double> out = group_attention_forward(f, {coords.data(), 1}, grid, cfg, p);

    // Expected: w_o^T (w_v^T (x + e) + b_v) + b_o, independent of q/k.
    const Matrix<double> e = embed_positions<double>({coords.data(), 1}, grid, p);
    std::vector<double> x(4);
    for (int j = 0; j < 4; ++j) {
        x[j] = f(0, j) + e(0, j);
    }
    std::vector<double> value(4);
    for (int j = 0; j < 4; ++j) {
        value[j] = p.b_v[j];
        for (int k = 0; k < 4; ++k) {
            value[j] += x[k] * p.w_v(k, j);
        }
    }
    for (int j = 0; j < 4; ++j) {
        double expected = p.b_o[j];
        for (int k = 0; k < 4; ++k) {
            expected += value[k] * p.w_o(k, j);
        }
        CHECK(out(0, j) == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("zero q/k weights give uniform attention over each group") {
    const GridSpec grid = GridSpec::create({0, 0, 0}, {8, 8, 1}, {1, 1, 1});
    const AttentionConfig cfg{4, 2, 3};
    AttentionParams<double> p = seeded_params(4, 0x52);
    p.w_q = Matrix<double>(4, 4);
    p.b_q.assign(4, 0.0);
    p.w_k = Matrix<double>(4, 4);
    p.b_k.assign(4, 0.0);

    const VoxelSet v = selftest::make_random_voxels(7, grid, 4, 0x53);
    const Matrix<double> f = to_matrix(v);
    const Matrix<double> out = group_attention_forward(f, coord_span(v), grid, cfg, p);

    // Every row of a group should equal w_o^T(mean of group values) + b_o.
    const Matrix<double> e = embed_positions<double>(coord_span(v), grid, p);
    const GroupBatch batch(7, 3);
    for (std::size_t g = 0; g < batch.group_count(); ++g) {
        const std::size_t rows = batch.valid_rows(g);
        std::vector<double> mean_value(4, 0.0);
        for (std::size_t r = 0; r < rows; ++r) {
            const std::size_t row = batch.begin(g) + r;
            for (int j = 0; j < 4; ++j) {
                double value = p.b_v[j];
                for (int k = 0; k < 4; ++k) {
                    value += (f(row, k) + e(row, k)) * p.w_v(k, j);
                }
                mean_value[j] += value;
            }
        }
        for (auto& value : mean_value) {
            value /= static_cast<double>(rows);
        }
        for (std::size_t r = 0; r < rows; ++r) {
            const std::size_t row = batch.begin(g) + r;
            for (int j = 0; j < 4; ++j) {
                double expected = p.b_o[j];
                for (int k = 0; k < 4; ++k) {
                    expected += mean_value[k] * p.w_o(k, j);
                }
                CHECK(out(row, j) == doctest::Approx(expected).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("grouped kernel matches the dense oracle when the group covers N") {
    const GridSpec grid = GridSpec::create({0, 0, 0}, {16, 16, 1}, {1, 1, 1});
    const AttentionConfig cfg{16, 4, 64};
    const AttentionParams<double> p = seeded_params(16, 0x54);
    const VoxelSet v = selftest::make_random_voxels(64, grid, 16, 0x55);
    const Matrix<double> f = to_matrix(v);

    const Matrix<double> grouped = group_attention_forward(f, coord_span(v), grid, cfg, p);
    const Matrix<double> dense =
        selftest::dense_attention_reference(f, coord_span(v), grid, cfg, p);
    for (std::size_t i = 0; i < grouped.size(); ++i) {
        CHECK(std::fabs(grouped.data()[i] - dense.data()[i]) <= 1e-10);
    }
}

TEST_CASE("non-finite input names the first offending coordinate") {
    const GridSpec grid = GridSpec::create({0, 0, 0}, {4, 4, 1}, {1, 1, 1});
    const AttentionConfig cfg{4, 1, 4};
    const AttentionParams<double> p = AttentionParams<double>::zeros(4);
    const std::vector<VoxelCoord> coords = {{0, 0, 0}, {1, 0, 0}};
    Matrix<double> f(2, 4);
    f(1, 2) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_WITH_AS(group_attention_forward(f, {coords.data(), 2}, grid, cfg, p),
                         doctest::Contains("row 1, channel 2"), numeric_error);
}

TEST_CASE("softmax rows sum to one over valid entries") {
    const GridSpec grid = GridSpec::create({0, 0, 0}, {8, 8, 1}, {1, 1, 1});
    const AttentionConfig cfg{8, 2, 4};
    const AttentionParams<double> p = seeded_params(8, 0x56);
    const VoxelSet v = selftest::make_random_voxels(11, grid, 8, 0x57);
    const Matrix<double> f = to_matrix(v);

    AttentionCache<double> cache;
    group_attention_forward(f, coord_span(v), grid, cfg, p, &cache);
    const GroupBatch batch(11, 4);
    REQUIRE(cache.probs.size() == batch.group_count() * cfg.heads);
    for (std::size_t g = 0; g < batch.group_count(); ++g) {
        for (std::size_t h = 0; h < cfg.heads; ++h) {
            const Matrix<double>& probs = cache.probs[g * cfg.heads + h];
            REQUIRE(probs.rows() == batch.valid_rows(g));
            for (std::size_t i = 0; i < probs.rows(); ++i) {
                double total = 0.0;
                for (std::size_t j = 0; j < probs.cols(); ++j) {
                    total += probs(i, j);
                }
                CHECK(std::fabs(total - 1.0) <= 1e-12);
            }
        }
    }
}

TEST_CASE("padding neutrality: the tail group ignores how much padding follows") {
    // Group 2 of a 13-row batch holds rows 10..12. Feeding just those three
    // rows (same params, same group size) must reproduce them bitwise.
    const GridSpec grid = GridSpec::create({0, 0, 0}, {8, 8, 1}, {1, 1, 1});
    const AttentionConfig cfg{8, 2, 5};
    const AttentionParams<double> p = seeded_params(8, 0x58);
    const VoxelSet v = selftest::make_random_voxels(13, grid, 8, 0x59);
    const Matrix<double> f = to_matrix(v);
    const Matrix<double> full = group_attention_forward(f, coord_span(v), grid, cfg, p);

    Matrix<double> tail(3, 8);
    std::vector<VoxelCoord> tail_coords(3);
    for (std::size_t r = 0; r < 3; ++r) {
        std::memcpy(tail.row_data(r), f.row_data(10 + r), 8 * sizeof(double));
        tail_coords[r] = v.coords[10 + r];
    }
    const Matrix<double> alone =
        group_attention_forward(tail, {tail_coords.data(), 3}, grid, cfg, p);
    for (std::size_t r = 0; r < 3; ++r) {
        CHECK(std::memcmp(alone.row_data(r), full.row_data(10 + r), 8 * sizeof(double)) == 0);
    }
}

TEST_CASE("zero upstream gradient produces all-zero gradients") {
    const GridSpec grid = GridSpec::create({0, 0, 0}, {4, 4, 1}, {1, 1, 1});
    const AttentionConfig cfg{4, 2, 4};
    AttentionParams<double> p = seeded_params(4, 0x5a);
    const VoxelSet v = selftest::make_random_voxels(6, grid, 4, 0x5b);
    const Matrix<double> f = to_matrix(v);

    AttentionCache<double> cache;
    group_attention_forward(f, coord_span(v), grid, cfg, p, &cache);
    const Matrix<double> upstream(6, 4);
    const AttentionGrads<double> grads = group_attention_backward(cache, upstream);

    auto all_zero = [](const double* data, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            if (data[i] != 0.0) {
                return false;
            }
        }
        return true;
    };
    CHECK(all_zero(grads.features.data(), grads.features.size()));
    CHECK(all_zero(grads.params.w_q.data(), grads.params.w_q.size()));
    CHECK(all_zero(grads.params.w_o.data(), grads.params.w_o.size()));
    CHECK(all_zero(grads.params.w_pos.data(), grads.params.w_pos.size()));
    CHECK(all_zero(grads.params.b_o.data(), grads.params.b_o.size()));
}

TEST_CASE("analytic gradients match central finite differences") {
    const GridSpec grid = GridSpec::create({0, 0, 0}, {4, 4, 1}, {1, 1, 1});
    const AttentionConfig cfg{4, 2, 4};
    AttentionParams<double> p = seeded_params(4, 0x5c);
    const VoxelSet v = selftest::make_random_voxels(8, grid, 4, 0x5d);
    Matrix<double> f = to_matrix(v);

    AttentionCache<double> cache;
    const Matrix<double> out = group_attention_forward(f, coord_span(v), grid, cfg, p, &cache);
    Matrix<double> upstream(out.rows(), out.cols());
    for (std::size_t i = 0; i < upstream.size(); ++i) {
        upstream.data()[i] = 1.0;
    }
    const AttentionGrads<double> grads = group_attention_backward(cache, upstream);

    auto loss = [&]() {
        const Matrix<double> y = group_attention_forward(f, coord_span(v), grid, cfg, p);
        double total = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            total += y.data()[i];
        }
        return total;
    };
    auto views = selftest::attention_param_views(p, grads.params);
    views.push_back(selftest::ParamView{"features", f.data(), f.size(), grads.features.data()});
    const auto result = selftest::check_gradients(loss, views, 1e-5, 1e-5);
    INFO("worst ", result.worst_location, " rel ", result.worst_rel_error);
    CHECK(result.pass);
    CHECK(result.checked == 96 + 32);
}

TEST_CASE("gradients do not leak across group boundaries") {
    const GridSpec grid = GridSpec::create({0, 0, 0}, {8, 8, 1}, {1, 1, 1});
    const AttentionConfig cfg{4, 2, 4};
    AttentionParams<double> p = seeded_params(4, 0x5e);
    const VoxelSet v = selftest::make_random_voxels(8, grid, 4, 0x5f);
    const Matrix<double> f = to_matrix(v);

    AttentionCache<double> cache;
    group_attention_forward(f, coord_span(v), grid, cfg, p, &cache);

    // Loss over group 0's outputs only: group 1 inputs must get exactly
    // zero gradient.
    Matrix<double> upstream(8, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            upstream(i, j) = 1.0;
        }
    }
    const AttentionGrads<double> grads = group_attention_backward(cache, upstream);
    for (std::size_t i = 4; i < 8; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(grads.features(i, j) == 0.0);
        }
    }

    // And perturbing a group-1 input does not change group-0 outputs.
    Matrix<double> mutated = f;
    mutated(6, 1) += 2.5;
    const Matrix<double> base = group_attention_forward(f, coord_span(v), grid, cfg, p);
    const Matrix<double> out = group_attention_forward(mutated, coord_span(v), grid, cfg, p);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::memcmp(out.row_data(i), base.row_data(i), 4 * sizeof(double)) == 0);
    }
}

TEST_CASE("backward rejects a mismatched upstream shape") {
    const GridSpec grid = GridSpec::create({0, 0, 0}, {4, 4, 1}, {1, 1, 1});
    const AttentionConfig cfg{4, 2, 4};
    const AttentionParams<double> p = AttentionParams<double>::zeros(4);
    const VoxelSet v = selftest::make_random_voxels(4, grid, 4, 0x60);
    const Matrix<double> f = to_matrix(v);
    AttentionCache<double> cache;
    group_attention_forward(f, coord_span(v), grid, cfg, p, &cache);
    const Matrix<double> bad(3, 4);
    CHECK_THROWS_AS(group_attention_backward(cache, bad), shape_error);
}

TEST_CASE("float instantiation runs end to end") {
    const GridSpec grid = GridSpec::create({0, 0, 0}, {8, 8, 1}, {1, 1, 1});
    const AttentionConfig cfg{8, 2, 4};
    AttentionParams<float> p = AttentionParams<float>::zeros(8);
    p.b_o.assign(8, 0.25f);
    const VoxelSet v = selftest::make_random_voxels(9, grid, 8, 0x61);
    Matrix<float> f(9, 8);
    for (std::size_t i = 0; i < f.size(); ++i) {
        f.data()[i] = static_cast<float>(v.features[i]);
    }
    const Matrix<float> out = group_attention_forward(f, coord_span(v), grid, cfg, p);
    for (std::size_t i = 0; i < out.rows(); ++i) {
        CHECK(out(i, 0) == 0.25f);
    }
}
