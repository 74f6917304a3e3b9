// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "segt/hilbert.hpp"
#include "segt/rng.hpp"

namespace {

std::vector<std::uint32_t> random_coords(std::size_t n, unsigned level, std::uint64_t seed) {
    segt::SplitMix64 rng(seed);
    std::vector<std::uint32_t> out(n);
    for (auto& c : out) {
        c = static_cast<std::uint32_t>(rng.next_below(std::uint64_t{1} << level));
    }
    return out;
}

void BM_HilbertEncode2D(benchmark::State& state) {
    const auto level = static_cast<unsigned>(state.range(0));
    const auto coords = random_coords(2048 * 2, level, 1);
    for (auto _ : state) {
        for (std::size_t i = 0; i + 1 < coords.size(); i += 2) {
            benchmark::DoNotOptimize(segt::hilbert::encode2(coords[i], coords[i + 1], level));
        }
    }
    state.SetItemsProcessed(state.iterations() * 2048);
}
BENCHMARK(BM_HilbertEncode2D)->Arg(6)->Arg(9)->Arg(16);

void BM_HilbertEncode3D(benchmark::State& state) {
    const auto level = static_cast<unsigned>(state.range(0));
    const auto coords = random_coords(2048 * 3, level, 2);
    for (auto _ : state) {
        for (std::size_t i = 0; i + 2 < coords.size(); i += 3) {
            benchmark::DoNotOptimize(
                segt::hilbert::encode3(coords[i], coords[i + 1], coords[i + 2], level));
        }
    }
    state.SetItemsProcessed(state.iterations() * 2048);
}
BENCHMARK(BM_HilbertEncode3D)->Arg(4)->Arg(9)->Arg(16);

void BM_HilbertDecode2D(benchmark::State& state) {
    const auto level = static_cast<unsigned>(state.range(0));
    segt::SplitMix64 rng(3);
    std::vector<std::uint64_t> indices(2048);
    for (auto& h : indices) {
        h = rng.next_below(std::uint64_t{1} << (2 * level));
    }
    std::uint32_t cell[2];
    for (auto _ : state) {
        for (const auto h : indices) {
            segt::hilbert::decode(h, level, 2, {cell, 2});
            benchmark::DoNotOptimize(cell[0]);
        }
    }
    state.SetItemsProcessed(state.iterations() * 2048);
}
BENCHMARK(BM_HilbertDecode2D)->Arg(9)->Arg(16);

} // namespace

BENCHMARK_MAIN();
