// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstring>
#include <sstream>
#include <vector>

#include "segt/bev_file.hpp"
#include "segt/errors.hpp"
#include "segt/params_io.hpp"
#include "segt/rng.hpp"
#include "segt/run_config.hpp"
#include "segt/selftest/suite.hpp"
#include "segt/voxel_file.hpp"

using namespace segt;

TEST_CASE("splitmix64 reproduces the published reference streams") {
    // Frozen from an independent implementation of the reference algorithm.
    SplitMix64 zero(0);
    CHECK(zero.next() == 0xe220a8397b1dcdafULL);
    CHECK(zero.next() == 0x6e789e6aa1b965f4ULL);
    CHECK(zero.next() == 0x06c45d188009454fULL);
    CHECK(zero.next() == 0xf88bb8a8724c81ecULL);
    CHECK(zero.next() == 0x1b39896a51a8749bULL);

    SplitMix64 forty_two(42);
    CHECK(forty_two.next() == 0xbdd732262feb6e95ULL);
    CHECK(forty_two.next() == 0x28efe333b266f103ULL);
    CHECK(forty_two.next() == 0x47526757130f9f52ULL);
}

TEST_CASE("splitmix64 unit doubles stay in [0, 1)") {
    SplitMix64 rng(123);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("empty config text yields the documented defaults") {
    const RunConfig c = parse_config("");
    CHECK(c.grid.dims[0] == 384);
    CHECK(c.grid.dims[1] == 384);
    CHECK(c.grid.dims[2] == 1);
    CHECK(c.grid.voxel_size[0] == 0.28125);
    CHECK(c.grid.voxel_size[2] == 8.0);
    CHECK(c.grid.range_min[0] == -54.0);
    CHECK(c.grid.range_max[2] == 3.0);
    CHECK(c.expansion.l_glb == 6);
    CHECK(c.expansion.l_lcl == 3); // derived: 384 needs 9 bits
    CHECK(c.group_size == 128);
    CHECK(c.channels == 128);
    CHECK(c.heads == 8);
    CHECK(c.seed == 0);
    CHECK(c.precision == Precision::f64);
}

TEST_CASE("single-key override keeps the remaining defaults") {
    const RunConfig c = parse_config("l_glb = 7\n");
    CHECK(c.expansion.l_glb == 7);
    CHECK(c.expansion.l_lcl == 2); // re-derived for the default grid
    CHECK(c.group_size == 128);
}

TEST_CASE("config rejects invariant violations naming the key") {
    CHECK_THROWS_WITH_AS(parse_config("group_size = 0\n"), doctest::Contains("group_size"),
                         config_error);
    CHECK_THROWS_WITH_AS(parse_config("heads = 7\n"), doctest::Contains("heads"), config_error);
    CHECK_THROWS_WITH_AS(parse_config("l_glb = 0\n"), doctest::Contains("l_glb"), config_error);
}

TEST_CASE("config rejects unknown keys and bad syntax with line numbers") {
    CHECK_THROWS_WITH_AS(parse_config("# fine\nwat = 3\n"), doctest::Contains("line 2"),
                         config_error);
    CHECK_THROWS_WITH_AS(parse_config("just words\n"), doctest::Contains("line 1"), config_error);
    CHECK_THROWS_WITH_AS(parse_config("seed = abc\n"), doctest::Contains("seed"), config_error);
    CHECK_THROWS_WITH_AS(parse_config("precision = f16\n"), doctest::Contains("precision"),
                         config_error);
}

TEST_CASE("comments, blank lines, and whitespace are tolerated") {
    const RunConfig c = parse_config("\n# comment\n  seed = 9  # trailing\n\n  l_glb=5\n");
    CHECK(c.seed == 9);
    CHECK(c.expansion.l_glb == 5);
    CHECK(c.expansion.l_lcl == 4);
}

TEST_CASE("config echo is canonical, reparseable, and stable") {
    const RunConfig c = parse_config("l_glb = 7\nseed = 11\nprecision = f32\n");
    const std::string echo1 = config_echo(c);
    const RunConfig reparsed = parse_config(echo1);
    const std::string echo2 = config_echo(reparsed);
    CHECK(echo1 == echo2);
    CHECK(reparsed.seed == 11);
    CHECK(reparsed.precision == Precision::f32);
    CHECK(echo1.find("l_glb = 7\n") != std::string::npos);
}

TEST_CASE("init_params is seed-deterministic and seed-sensitive") {
    RunConfig c;
    c.grid = GridSpec::create({0, 0, 0}, {16, 16, 1}, {1, 1, 1});
    c.expansion = ExpansionConfig{2, 2};
    c.channels = 8;
    c.heads = 2;
    c.group_size = 4;
    c.seed = 42;

    const EncoderParams<double> a = init_params<double>(c);
    const EncoderParams<double> b = init_params<double>(c);
    CHECK(a.layers[0].attention.w_q == b.layers[0].attention.w_q);
    CHECK(a.layers[15].ffn_w1 == b.layers[15].ffn_w1);

    c.seed = 43;
    const EncoderParams<double> other = init_params<double>(c);
    CHECK_FALSE(a.layers[0].attention.w_q == other.layers[0].attention.w_q);

    // Biases zero, gains one, and identity mode zeroes the output projections.
    CHECK(a.layers[0].attention.b_q == std::vector<double>(8, 0.0));
    CHECK(a.layers[0].norm1_gain == std::vector<double>(8, 1.0));
    const EncoderParams<double> ident = init_params<double>(c, InitMode::identity);
    for (std::size_t i = 0; i < ident.layers[0].attention.w_o.size(); ++i) {
        CHECK(ident.layers[0].attention.w_o.data()[i] == 0.0);
    }
    for (std::size_t i = 0; i < ident.layers[0].ffn_w2.size(); ++i) {
        CHECK(ident.layers[0].ffn_w2.data()[i] == 0.0);
    }
}

TEST_CASE("SEGW round trip is bitwise exact") {
    RunConfig c;
    c.grid = GridSpec::create({0, 0, 0}, {16, 16, 1}, {1, 1, 1});
    c.expansion = ExpansionConfig{2, 2};
    c.channels = 8;
    c.heads = 2;
    c.group_size = 4;
    c.seed = 1234;

    const EncoderParams<double> params = init_params<double>(c);
    std::stringstream buffer1, buffer2;
    save_params(buffer1, c, params);
    const std::string bytes1 = buffer1.str();

    std::stringstream reader(bytes1);
    RunConfig loaded_config;
    const EncoderParams<double> loaded = load_params<double>(reader, &loaded_config);
    CHECK(loaded_config.seed == 1234);
    CHECK(loaded_config.channels == 8);
    for (std::size_t l = 0; l < EncoderLayout::total_layers; ++l) {
        CHECK(loaded.layers[l].attention.w_q == params.layers[l].attention.w_q);
        CHECK(loaded.layers[l].attention.b_pos == params.layers[l].attention.b_pos);
        CHECK(loaded.layers[l].ffn_w2 == params.layers[l].ffn_w2);
        CHECK(loaded.layers[l].norm2_bias == params.layers[l].norm2_bias);
    }

    save_params(buffer2, c, loaded);
    CHECK(buffer2.str() == bytes1); // save(load(x)) == x byte for byte

    // Same seed, fresh generation: identical bytes.
    std::stringstream buffer3;
    save_params(buffer3, c, init_params<double>(c));
    CHECK(buffer3.str() == bytes1);
}

TEST_CASE("SEGW rejects truncation, bad magic, and precision mismatch") {
    RunConfig c;
    c.grid = GridSpec::create({0, 0, 0}, {16, 16, 1}, {1, 1, 1});
    c.expansion = ExpansionConfig{2, 2};
    c.channels = 8;
    c.heads = 2;
    c.group_size = 4;

    std::stringstream buffer;
    save_params(buffer, c, init_params<double>(c));
    const std::string bytes = buffer.str();

    std::stringstream truncated(bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS_WITH_AS(load_params<double>(truncated), doctest::Contains("truncated"),
                         io_error);

    std::string mangled = bytes;
    mangled[0] = 'X';
    std::stringstream bad_magic(mangled);
    CHECK_THROWS_AS(load_params<double>(bad_magic), io_error);

    std::stringstream wrong_precision(bytes);
    CHECK_THROWS_AS(load_params<float>(wrong_precision), config_error);
}

TEST_CASE("f32 SEGW stores and reloads float params exactly") {
    RunConfig c;
    c.grid = GridSpec::create({0, 0, 0}, {16, 16, 1}, {1, 1, 1});
    c.expansion = ExpansionConfig{2, 2};
    c.channels = 8;
    c.heads = 2;
    c.group_size = 4;
    c.precision = Precision::f32;

    const EncoderParams<float> params = init_params<float>(c);
    std::stringstream buffer;
    save_params(buffer, c, params);
    std::stringstream reader(buffer.str());
    const EncoderParams<float> loaded = load_params<float>(reader);
    CHECK(loaded.layers[7].attention.w_v == params.layers[7].attention.w_v);
}

TEST_CASE("SEGV round trip preserves coords, grid, and f32 features") {
    const GridSpec grid = GridSpec::create({-4, -4, -1}, {4, 4, 1}, {0.5, 0.5, 2.0});
    VoxelSet v = selftest::make_random_voxels(200, grid, 5, 0x90);
    // Snap features to f32 so the round trip is lossless end to end.
    for (auto& f : v.features) {
        f = static_cast<double>(static_cast<float>(f));
    }

    std::stringstream buffer;
    write_voxels(buffer, v);
    const VoxelSet loaded = read_voxels(buffer);
    CHECK(loaded.size() == v.size());
    CHECK(loaded.channel_count == v.channel_count);
    CHECK(loaded.coords == v.coords);
    CHECK(loaded.grid.dims == v.grid.dims);
    CHECK(loaded.grid.range_min == v.grid.range_min);
    CHECK(std::memcmp(loaded.features.data(), v.features.data(),
                      v.features.size() * sizeof(double)) == 0);
}

TEST_CASE("SEGV rejects duplicates, out-of-grid coords, and truncation") {
    const GridSpec grid = GridSpec::create({0, 0, 0}, {4, 4, 1}, {1, 1, 1});
    VoxelSet v;
    v.grid = grid;
    v.channel_count = 3;
    v.coords = {{1, 1, 0}, {1, 1, 0}};
    v.features.assign(6, 1.0);

    std::stringstream dup_buffer;
    write_voxels(dup_buffer, v);
    CHECK_THROWS_WITH_AS(read_voxels(dup_buffer), doctest::Contains("duplicate"), io_error);

    v.coords = {{1, 1, 0}, {9, 1, 0}};
    std::stringstream oob_buffer;
    write_voxels(oob_buffer, v);
    CHECK_THROWS_WITH_AS(read_voxels(oob_buffer), doctest::Contains("out of grid"), io_error);

    v.coords = {{1, 1, 0}, {2, 1, 0}};
    std::stringstream ok_buffer;
    write_voxels(ok_buffer, v);
    const std::string bytes = ok_buffer.str();
    std::stringstream truncated(bytes.substr(0, bytes.size() - 5));
    CHECK_THROWS_WITH_AS(read_voxels(truncated), doctest::Contains("truncated"), io_error);
}

TEST_CASE("binary point reader validates stride and size") {
    const float raw[10] = {0.5f, 0.5f, 0.5f, 1.0f, 2.0f, 1.5f, 1.5f, 1.5f, 3.0f, 4.0f};
    std::stringstream buffer;
    buffer.write(reinterpret_cast<const char*>(raw), sizeof(raw));
    const PointCloud cloud = read_points_binary(buffer, 5);
    REQUIRE(cloud.size() == 2);
    CHECK(cloud.extra_count == 2);
    CHECK(cloud.point(1)[4] == 4.0);

    std::stringstream partial;
    partial.write(reinterpret_cast<const char*>(raw), 13); // not a multiple of 20
    CHECK_THROWS_AS(read_points_binary(partial, 5), io_error);

    std::stringstream any;
    CHECK_THROWS_AS(read_points_binary(any, 2), config_error);
}

TEST_CASE("csv point reader parses header-declared extras") {
    std::stringstream csv("x,y,z,intensity\n1.0,2.0,3.0,0.5\n4.0,5.0,6.0,0.25\n");
    const PointCloud cloud = read_points_csv(csv);
    REQUIRE(cloud.size() == 2);
    CHECK(cloud.extra_count == 1);
    CHECK(cloud.point(0)[0] == 1.0);
    CHECK(cloud.point(1)[3] == 0.25);

    std::stringstream bad_header("a,b,c\n1,2,3\n");
    CHECK_THROWS_AS(read_points_csv(bad_header), io_error);

    std::stringstream bad_row("x,y,z\n1.0,oops,3.0\n");
    CHECK_THROWS_WITH_AS(read_points_csv(bad_row), doctest::Contains("line 2"), io_error);
}

TEST_CASE("BEV channel CSV slice lists every cell of one channel") {
    VoxelSet v;
    v.grid = GridSpec::create({0, 0, 0}, {2, 3, 1}, {1, 1, 1});
    v.channel_count = 2;
    v.coords = {{1, 2, 0}};
    v.features = {4.0, -9.0};
    const BevGrid bev = bev_scatter(v);

    std::stringstream out;
    write_bev_channel_csv(out, bev, 1);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(out, line)) {
        lines.push_back(line);
    }
    REQUIRE(lines.size() == 1 + 2 * 3);
    CHECK(lines[0] == "x,y,value");
    CHECK(lines[1] == "0,0,0");
    CHECK(lines.back() == "1,2,-9");
    CHECK_THROWS_AS(write_bev_channel_csv(out, bev, 2), shape_error);
}

TEST_CASE("SEGB round trip preserves dims and f32 values") {
    VoxelSet v;
    v.grid = GridSpec::create({0, 0, 0}, {4, 6, 1}, {1, 1, 1});
    v.channel_count = 3;
    v.coords = {{1, 2, 0}, {3, 5, 0}};
    v.features = {1.0, 2.0, 3.0, -4.0, -5.0, -6.0};
    const BevGrid bev = bev_scatter(v);

    std::stringstream buffer;
    write_bev(buffer, bev);
    const BevData loaded = read_bev(buffer);
    CHECK(loaded.dims_x == 4);
    CHECK(loaded.dims_y == 6);
    CHECK(loaded.channels == 3);
    CHECK(loaded.values[(1 * 6 + 2) * 3 + 0] == 1.0f);
    CHECK(loaded.values[(3 * 6 + 5) * 3 + 2] == -6.0f);
}
