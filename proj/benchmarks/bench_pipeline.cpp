// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <cstring>

#include "segt/attention.hpp"
#include "segt/encoder.hpp"
#include "segt/params_io.hpp"
#include "segt/run_config.hpp"
#include "segt/selftest/suite.hpp"
#include "segt/serialization.hpp"
#include "segt/voxelizer.hpp"

namespace {

void BM_Serialize(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const segt::GridSpec grid = segt::RunConfig::defaults().grid;
    const segt::VoxelSet voxels = segt::selftest::make_random_voxels(n, grid, 4, 7);
    const segt::ExpansionConfig expansion{6, 3};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            segt::serialize(voxels, segt::Strategy::Plus, expansion));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Serialize)->Arg(10000)->Arg(100000);

void BM_Voxelize(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const segt::GridSpec grid = segt::RunConfig::defaults().grid;
    segt::SplitMix64 rng(11);
    segt::PointCloud cloud;
    cloud.extra_count = 2;
    for (std::size_t i = 0; i < n; ++i) {
        const double p[5] = {rng.next_uniform(-54, 54), rng.next_uniform(-54, 54),
                             rng.next_uniform(-5, 3), rng.next_unit(), rng.next_unit()};
        cloud.append({p, 5});
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(segt::voxelize(cloud, grid));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Voxelize)->Arg(100000);

void BM_GroupAttention(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    segt::RunConfig config = segt::RunConfig::defaults();
    const segt::VoxelSet voxels =
        segt::selftest::make_random_voxels(n, config.grid, config.channels, 13);
    const segt::EncoderParams<double> params = segt::init_params<double>(config);
    segt::Matrix<double> features(n, config.channels);
    std::memcpy(features.data(), voxels.features.data(), features.size() * sizeof(double));
    for (auto _ : state) {
        benchmark::DoNotOptimize(segt::group_attention_forward(
            features, std::span<const segt::VoxelCoord>{voxels.coords}, config.grid,
            params.attention, params.layers[0].attention));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_GroupAttention)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_SegtLayer(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    segt::RunConfig config = segt::RunConfig::defaults();
    const segt::VoxelSet voxels =
        segt::selftest::make_random_voxels(n, config.grid, config.channels, 17);
    const segt::EncoderParams<double> params = segt::init_params<double>(config);
    for (auto _ : state) {
        benchmark::DoNotOptimize(segt::segt_layer(voxels, segt::Strategy::Minus,
                                                  params.layers[0], params.attention,
                                                  params.expansion));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SegtLayer)->Arg(4096)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
