// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#include "segt/selftest/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <unordered_map>

#include "segt/attention.hpp"
#include "segt/bev.hpp"
#include "segt/encoder.hpp"
#include "segt/hilbert.hpp"
#include "segt/params_io.hpp"
#include "segt/rng.hpp"
#include "segt/run_config.hpp"
#include "segt/selftest/gradcheck.hpp"
#include "segt/selftest/reference_attention.hpp"
#include "segt/selftest/reference_curves.hpp"
#include "segt/serialization.hpp"

namespace segt::selftest {

namespace {

using clock_type = std::chrono::steady_clock;

std::string format_ms(double ms) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", ms);
    return buf;
}

std::uint64_t manhattan(const Cell& a, const Cell& b, unsigned dim) {
    std::uint64_t total = 0;
    for (unsigned j = 0; j < dim; ++j) {
        total += a[j] > b[j] ? a[j] - b[j] : b[j] - a[j];
    }
    return total;
}

// ---- curve checks -------------------------------------------------------

using EncodeFn = std::function<std::uint64_t(std::span<const std::uint32_t>, unsigned, unsigned)>;

CheckResult check_curve_bijectivity(const EncodeFn& encode) {
    CheckResult result{"curve-bijectivity", true, "", 0.0};
    const auto start = clock_type::now();
    auto sweep = [&](unsigned dim, unsigned max_level) {
        for (unsigned level = 1; level <= max_level && result.pass; ++level) {
            const std::uint64_t count = std::uint64_t{1} << (dim * level);
            std::uint32_t cell[3] = {0, 0, 0};
            for (std::uint64_t index = 0; index < count; ++index) {
                hilbert::decode(index, level, dim, {cell, dim});
                const std::uint64_t redone = encode({cell, dim}, level, dim);
                if (redone != index) {
                    result.pass = false;
                    result.detail = "encode(decode(" + std::to_string(index) + ")) = " +
                                    std::to_string(redone) + " at dim " + std::to_string(dim) +
                                    " level " + std::to_string(level);
                    break;
                }
            }
        }
    };
    sweep(2, 5);
    sweep(3, 4);
    result.ms = std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
    if (result.pass) {
        result.detail = "2d levels 1-5, 3d levels 1-4 exhaustive";
    }
    return result;
}

CheckResult check_curve_oracle_equivalence(const EncodeFn& encode) {
    CheckResult result{"curve-oracle-equivalence", true, "", 0.0};
    const auto start = clock_type::now();
    auto sweep = [&](unsigned dim, unsigned max_level) {
        for (unsigned level = 1; level <= max_level && result.pass; ++level) {
            const std::vector<Cell> cells = reference_curve(level, dim);
            for (std::size_t index = 0; index < cells.size(); ++index) {
                if (encode({cells[index].data(), dim}, level, dim) != index) {
                    result.pass = false;
                    result.detail = "kernel disagrees with recursive reference at dim " +
                                    std::to_string(dim) + " level " + std::to_string(level) +
                                    " index " + std::to_string(index);
                    return;
                }
            }
            if (dim == 2 && reference_curve(level, 2) != quadrant_curve_2d(level)) {
                result.pass = false;
                result.detail = "recursive reference disagrees with quadrant construction at level " +
                                std::to_string(level);
                return;
            }
        }
    };
    sweep(2, 5);
    sweep(3, 4);
    result.ms = std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
    if (result.pass) {
        result.detail = "kernel == recursive reference == quadrant construction";
    }
    return result;
}

CheckResult check_curve_adjacency() {
    CheckResult result{"curve-adjacency", true, "", 0.0};
    const auto start = clock_type::now();
    auto sweep = [&](unsigned dim, unsigned max_level) {
        for (unsigned level = 1; level <= max_level && result.pass; ++level) {
            const std::uint64_t count = std::uint64_t{1} << (dim * level);
            Cell prev{}, cur{};
            hilbert::decode(0, level, dim, {prev.data(), dim});
            for (std::uint64_t index = 1; index < count; ++index) {
                hilbert::decode(index, level, dim, {cur.data(), dim});
                if (manhattan(prev, cur, dim) != 1) {
                    result.pass = false;
                    result.detail = "non-adjacent step at dim " + std::to_string(dim) +
                                    " level " + std::to_string(level) + " index " +
                                    std::to_string(index);
                    break;
                }
                prev = cur;
            }
        }
    };
    sweep(2, 5);
    sweep(3, 4);
    result.ms = std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
    if (result.pass) {
        result.detail = "every consecutive pair at Manhattan distance 1";
    }
    return result;
}

// ---- plan checks --------------------------------------------------------

bool plan_is_bijective(const SerializationPlan& plan) {
    const std::size_t n = plan.size();
    std::vector<char> hit(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (plan.order[i] >= n || hit[plan.order[i]] != 0) {
            return false;
        }
        hit[plan.order[i]] = 1;
        if (plan.inverse[plan.order[i]] != i) {
            return false;
        }
    }
    return true;
}

CheckResult check_plan_round_trip() {
    CheckResult result{"plan-round-trip", true, "", 0.0};
    const auto start = clock_type::now();
    const GridSpec grid = RunConfig::defaults().grid;
    const ExpansionConfig expansion{6, 3};
    const std::size_t sizes[] = {0, 1, 1000, 65536};
    for (const std::size_t n : sizes) {
        const VoxelSet voxels = make_random_voxels(n, grid, 8, 0x5e61 + n);
        const SerializationPlan plan = serialize(voxels, Strategy::Plus, expansion);
        if (!plan_is_bijective(plan)) {
            result.pass = false;
            result.detail = "plan not bijective at n=" + std::to_string(n);
            break;
        }
        Matrix<double> features(n, 8);
        std::memcpy(features.data(), voxels.features.data(), n * 8 * sizeof(double));
        const Matrix<double> round = scatter(gather(features, plan), plan);
        if (!(round == features)) {
            result.pass = false;
            result.detail = "scatter(gather(F)) != F at n=" + std::to_string(n);
            break;
        }
    }
    result.ms = std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
    if (result.pass) {
        result.detail = "bitwise identity for n in {0, 1, 1000, 65536}";
    }
    return result;
}

CheckResult check_conjugacy_distinctness() {
    CheckResult result{"conjugacy-distinctness", true, "", 0.0};
    const auto start = clock_type::now();
    const GridSpec grid = RunConfig::defaults().grid;
    const ExpansionConfig expansion{6, 3};
    const VoxelSet voxels = make_random_voxels(1000, grid, 4, 0xc0431);
    const SerializationPlan plus = serialize(voxels, Strategy::Plus, expansion);
    const SerializationPlan minus = serialize(voxels, Strategy::Minus, expansion);
    if (!plan_is_bijective(plus) || !plan_is_bijective(minus)) {
        result.pass = false;
        result.detail = "a conjugate plan is not bijective";
    } else if (plus.order == minus.order) {
        result.pass = false;
        result.detail = "Plus and Minus produce the same permutation";
    } else {
        std::size_t differing = 0;
        for (std::size_t i = 0; i < plus.order.size(); ++i) {
            differing += plus.order[i] != minus.order[i] ? 1 : 0;
        }
        result.detail = std::to_string(differing) + "/1000 ranks differ between strategies";
    }
    result.ms = std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
    return result;
}

// ---- attention checks ---------------------------------------------------

AttentionParams<double> random_attention_params(std::size_t channels, std::uint64_t seed) {
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

CheckResult check_attention_dense_oracle() {
    CheckResult result{"attention-dense-oracle", true, "", 0.0};
    const auto start = clock_type::now();
    const GridSpec grid = GridSpec::create({0, 0, 0}, {16, 16, 1}, {1, 1, 1});
    const AttentionConfig cfg{16, 4, 64};
    const VoxelSet voxels = make_random_voxels(64, grid, 16, 0xde45e);
    const AttentionParams<double> params = random_attention_params(16, 0xde45f);
    Matrix<double> features(64, 16);
    std::memcpy(features.data(), voxels.features.data(), features.size() * sizeof(double));

    const Matrix<double> grouped = group_attention_forward(
        features, std::span<const VoxelCoord>{voxels.coords}, grid, cfg, params);
    const Matrix<double> dense = dense_attention_reference(
        features, std::span<const VoxelCoord>{voxels.coords}, grid, cfg, params);

    double max_abs = 0.0;
    for (std::size_t i = 0; i < grouped.size(); ++i) {
        max_abs = std::max(max_abs, std::fabs(grouped.data()[i] - dense.data()[i]));
    }
    result.pass = max_abs <= 1e-10;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "max |grouped - dense| = %.3e", max_abs);
    result.detail = buf;
    result.ms = std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
    return result;
}

CheckResult check_attention_group_isolation() {
    CheckResult result{"attention-group-isolation", true, "", 0.0};
    const auto start = clock_type::now();
    const GridSpec grid = GridSpec::create({0, 0, 0}, {8, 8, 1}, {1, 1, 1});
    const AttentionConfig cfg{8, 2, 4};
    const std::size_t n = 12;
    const VoxelSet voxels = make_random_voxels(n, grid, 8, 0x150);
    const AttentionParams<double> params = random_attention_params(8, 0x151);
    Matrix<double> features(n, 8);
    std::memcpy(features.data(), voxels.features.data(), features.size() * sizeof(double));

    const Matrix<double> base = group_attention_forward(
        features, std::span<const VoxelCoord>{voxels.coords}, grid, cfg, params);

    const GroupBatch batch(n, cfg.group_size);
    for (std::size_t perturbed = 0; perturbed < n && result.pass; ++perturbed) {
        Matrix<double> mutated = features;
        mutated(perturbed, 0) += 0.75;
        mutated(perturbed, 3) -= 1.25;
        const Matrix<double> out = group_attention_forward(
            mutated, std::span<const VoxelCoord>{voxels.coords}, grid, cfg, params);
        const std::size_t group_of_perturbed = perturbed / cfg.group_size;
        for (std::size_t g = 0; g < batch.group_count() && result.pass; ++g) {
            if (g == group_of_perturbed) {
                continue;
            }
            for (std::size_t r = batch.begin(g); r < batch.begin(g) + batch.valid_rows(g); ++r) {
                if (std::memcmp(out.row_data(r), base.row_data(r), 8 * sizeof(double)) != 0) {
                    result.pass = false;
                    result.detail = "perturbing row " + std::to_string(perturbed) +
                                    " changed row " + std::to_string(r) + " in another group";
                    break;
                }
            }
        }
    }
    result.ms = std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
    if (result.pass) {
        result.detail = "cross-group effect exactly zero for every perturbed token";
    }
    return result;
}

CheckResult check_attention_gradients() {
    CheckResult result{"attention-gradient-check", true, "", 0.0};
    const auto start = clock_type::now();
    const GridSpec grid = GridSpec::create({0, 0, 0}, {4, 4, 1}, {1, 1, 1});
    const AttentionConfig cfg{4, 2, 4};
    const std::size_t n = 8;
    const VoxelSet voxels = make_random_voxels(n, grid, 4, 0x9fad);
    AttentionParams<double> params = random_attention_params(4, 0x9fae);
    Matrix<double> features(n, 4);
    std::memcpy(features.data(), voxels.features.data(), features.size() * sizeof(double));

    AttentionCache<double> cache;
    const Matrix<double> out = group_attention_forward(
        features, std::span<const VoxelCoord>{voxels.coords}, grid, cfg, params, &cache);
    Matrix<double> upstream(out.rows(), out.cols());
    for (std::size_t i = 0; i < upstream.size(); ++i) {
        upstream.data()[i] = 1.0; // loss = sum of outputs
    }
    const AttentionGrads<double> grads = group_attention_backward(cache, upstream);

    auto loss = [&]() {
        const Matrix<double> y = group_attention_forward(
            features, std::span<const VoxelCoord>{voxels.coords}, grid, cfg, params);
        double total = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            total += y.data()[i];
        }
        return total;
    };

    std::vector<ParamView> views = attention_param_views(params, grads.params);
    views.push_back(ParamView{"features", features.data(), features.size(),
                              grads.features.data()});
    const GradCheckResult check = check_gradients(loss, views, 1e-5, 1e-5);

    result.pass = check.pass;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%zu scalars, worst rel %.3e at %s", check.checked,
                  check.worst_rel_error, check.worst_location.c_str());
    result.detail = buf;
    result.ms = std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
    return result;
}

// ---- encoder checks -----------------------------------------------------

CheckResult check_encoder_identity() {
    CheckResult result{"encoder-identity", true, "", 0.0};
    const auto start = clock_type::now();
    RunConfig config = RunConfig::defaults();
    config.seed = 7;
    const EncoderParams<double> params = init_params<double>(config, InitMode::identity);
    const VoxelSet voxels = make_random_voxels(500, config.grid, config.channels, 0x1de41);
    const VoxelSet out = encoder_forward(voxels, params);
    if (out.features.size() != voxels.features.size() ||
        std::memcmp(out.features.data(), voxels.features.data(),
                    voxels.features.size() * sizeof(double)) != 0) {
        result.pass = false;
        result.detail = "zero residual projections did not give the exact identity";
    } else {
        result.detail = "16-layer encoder is the exact identity at identity init";
    }
    result.ms = std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
    return result;
}

VoxelSet shuffled_rows(const VoxelSet& voxels, std::uint64_t seed) {
    std::vector<std::size_t> perm(voxels.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    SplitMix64 rng(seed);
    for (std::size_t i = perm.size(); i > 1; --i) {
        std::swap(perm[i - 1], perm[rng.next_below(i)]);
    }
    VoxelSet out = voxels;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        out.coords[i] = voxels.coords[perm[i]];
        std::memcpy(out.feature_row(i).data(), voxels.feature_row(perm[i]).data(),
                    voxels.channel_count * sizeof(double));
    }
    return out;
}

std::uint64_t coord_key(const VoxelCoord& c, const GridSpec& grid) {
    return (static_cast<std::uint64_t>(c[2]) * grid.dims[1] + c[1]) * grid.dims[0] + c[0];
}

CheckResult check_encoder_permutation_invariance() {
    CheckResult result{"encoder-permutation-invariance", true, "", 0.0};
    const auto start = clock_type::now();
    RunConfig config = RunConfig::defaults();
    config.seed = 20;
    const EncoderParams<double> params = init_params<double>(config);
    const VoxelSet voxels = make_random_voxels(2000, config.grid, config.channels, 0xbeef);
    const VoxelSet shuffled = shuffled_rows(voxels, 0xfeed);

    const VoxelSet out_a = encoder_forward(voxels, params);
    const VoxelSet out_b = encoder_forward(shuffled, params);

    std::unordered_map<std::uint64_t, std::size_t> row_of;
    row_of.reserve(out_b.size());
    for (std::size_t i = 0; i < out_b.size(); ++i) {
        row_of.emplace(coord_key(out_b.coords[i], config.grid), i);
    }
    for (std::size_t i = 0; i < out_a.size() && result.pass; ++i) {
        const auto it = row_of.find(coord_key(out_a.coords[i], config.grid));
        if (it == row_of.end()) {
            result.pass = false;
            result.detail = "output coordinate sets differ";
            break;
        }
        if (std::memcmp(out_a.feature_row(i).data(), out_b.feature_row(it->second).data(),
                        config.channels * sizeof(double)) != 0) {
            result.pass = false;
            result.detail = "coordinate-matched outputs differ bitwise at row " +
                            std::to_string(i);
        }
    }
    result.ms = std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
    if (result.pass) {
        result.detail = "2000-voxel shuffle reproduced bitwise across 16 layers";
    }
    return result;
}

CheckResult check_encoder_strategy_sensitivity() {
    CheckResult result{"encoder-strategy-sensitivity", true, "", 0.0};
    const auto start = clock_type::now();
    RunConfig config = RunConfig::defaults();
    config.seed = 20;
    const EncoderParams<double> params = init_params<double>(config);
    const VoxelSet voxels = make_random_voxels(2000, config.grid, config.channels, 0xbeef);

    const VoxelSet alternating = encoder_forward(voxels, params);
    VoxelSet all_plus = voxels;
    for (std::size_t layer = 0; layer < EncoderLayout::total_layers; ++layer) {
        all_plus = segt_layer(all_plus, Strategy::Plus, params.layers[layer], params.attention,
                              params.expansion);
    }

    double max_abs = 0.0;
    for (std::size_t i = 0; i < alternating.features.size(); ++i) {
        max_abs = std::max(max_abs,
                           std::fabs(alternating.features[i] - all_plus.features[i]));
    }
    result.pass = max_abs > 1e-6;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max |alternating - all-plus| = %.3e", max_abs);
    result.detail = buf;
    result.ms = std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
    return result;
}

CheckResult check_bev_conservation() {
    CheckResult result{"bev-conservation", true, "", 0.0};
    const auto start = clock_type::now();
    const GridSpec grid = GridSpec::create({0, 0, 0}, {64, 64, 4}, {1, 1, 1});
    const VoxelSet voxels = make_random_voxels(3000, grid, 16, 0xbe5, /*integer_features=*/true);
    const BevGrid bev = bev_scatter(voxels);

    double bev_total = 0.0;
    for (const double v : bev.values) {
        bev_total += v;
    }
    double feature_total = 0.0;
    for (const double v : voxels.features) {
        feature_total += v;
    }
    result.pass = bev_total == feature_total;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "bev sum %.1f vs feature sum %.1f", bev_total, feature_total);
    result.detail = buf;
    result.ms = std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
    return result;
}

CheckResult check_serialize_throughput(const SuiteOptions& options) {
    CheckResult result{"serialize-throughput", true, "", 0.0};
    const auto start = clock_type::now();
    const GridSpec grid = RunConfig::defaults().grid;
    const ExpansionConfig expansion{6, 3};
    const VoxelSet voxels = make_random_voxels(options.bench_voxels, grid, 4, 0x71f);

    std::vector<double> laps;
    laps.reserve(static_cast<std::size_t>(options.bench_repeat));
    for (int r = 0; r < options.bench_repeat; ++r) {
        const auto t0 = clock_type::now();
        const SerializationPlan plan = serialize(voxels, Strategy::Plus, expansion, 1);
        const auto t1 = clock_type::now();
        if (plan.size() != voxels.size()) {
            result.pass = false;
            result.detail = "plan size mismatch";
            return result;
        }
        laps.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    std::sort(laps.begin(), laps.end());
    const double median = laps[laps.size() / 2];
    // Soft budget: pass under 100 ms, tolerate (with a note) up to 2x, fail beyond.
    if (median < 100.0) {
        result.detail = "median " + format_ms(median) + " ms for " +
                        std::to_string(options.bench_voxels) + " voxels (budget 100 ms)";
    } else if (median < 200.0) {
        result.detail = "median " + format_ms(median) +
                        " ms exceeds the 100 ms budget but is within the 2x allowance";
    } else {
        result.pass = false;
        result.detail = "median " + format_ms(median) + " ms is more than 2x the 100 ms budget";
    }
    result.ms = std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
    return result;
}

} // namespace

VoxelSet make_random_voxels(std::size_t count, const GridSpec& grid, std::size_t channels,
                            std::uint64_t seed, bool integer_features) {
    const std::uint64_t cells = grid.cell_count();
    if (count > cells) {
        throw config_error("make_random_voxels: more voxels than grid cells");
    }
    SplitMix64 rng(seed);

    // Partial Fisher-Yates over the linearized cells gives distinct
    // coordinates with a deterministic stream.
    std::vector<std::uint64_t> linear(cells);
    std::iota(linear.begin(), linear.end(), std::uint64_t{0});
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t j = i + rng.next_below(cells - i);
        std::swap(linear[i], linear[j]);
    }

    VoxelSet out;
    out.grid = grid;
    out.channel_count = channels;
    out.coords.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t id = linear[i];
        out.coords[i] = VoxelCoord{
            static_cast<std::uint32_t>(id % grid.dims[0]),
            static_cast<std::uint32_t>((id / grid.dims[0]) % grid.dims[1]),
            static_cast<std::uint32_t>(id / (static_cast<std::uint64_t>(grid.dims[0]) * grid.dims[1]))};
    }
    out.features.resize(count * channels);
    for (auto& f : out.features) {
        if (integer_features) {
            f = static_cast<double>(static_cast<std::int64_t>(rng.next_below(17)) - 8);
        } else {
            f = rng.next_uniform(-1.0, 1.0);
        }
    }
    return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CheckResult& r) { return r.pass; });
}

std::vector<CheckResult> run_suite(const SuiteOptions& options,
                                   const std::function<void(const CheckResult&)>& on_result) {
    EncodeFn encode = [](std::span<const std::uint32_t> c, unsigned level, unsigned dim) {
        return hilbert::encode(c, level, dim);
    };
    if (options.corrupt_curve_kernel) {
        encode = [](std::span<const std::uint32_t> c, unsigned level, unsigned dim) {
            const std::uint64_t h = hilbert::encode(c, level, dim);
            return h == 2 ? std::uint64_t{3} : h; // deliberate collision
        };
    }

    std::vector<CheckResult> results;
    auto add = [&](CheckResult r) {
        if (on_result) {
            on_result(r);
        }
        results.push_back(std::move(r));
    };

    add(check_curve_bijectivity(encode));
    add(check_curve_oracle_equivalence(encode));
    add(check_curve_adjacency());
    add(check_plan_round_trip());
    add(check_conjugacy_distinctness());
    add(check_attention_dense_oracle());
    add(check_attention_group_isolation());
    add(check_attention_gradients());
    add(check_encoder_identity());
    add(check_encoder_permutation_invariance());
    add(check_encoder_strategy_sensitivity());
    add(check_bev_conservation());
    add(check_serialize_throughput(options));
    return results;
}

} // namespace segt::selftest
