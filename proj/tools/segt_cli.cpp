// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Machine-readable key=value lines go to stdout;
// human prose goes to stderr. Exit codes: 0 ok, 1 selftest failure,
// 2 I/O error, 3 config error, 4 shape/data error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "segt/attention.hpp"
#include "segt/bev.hpp"
#include "segt/bev_file.hpp"
#include "segt/encoder.hpp"
#include "segt/errors.hpp"
#include "segt/inspect.hpp"
#include "segt/params_io.hpp"
#include "segt/run_config.hpp"
#include "segt/selftest/suite.hpp"
#include "segt/serialization.hpp"
#include "segt/voxel_file.hpp"
#include "segt/voxelizer.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSelftest = 1;
constexpr int kExitIo = 2;
constexpr int kExitConfig = 3;
constexpr int kExitShape = 4;

segt::RunConfig load_config_or_defaults(const std::string& path) {
    if (path.empty()) {
        return segt::RunConfig::defaults();
    }
    return segt::load_config_file(path);
}

unsigned resolve_threads(unsigned flag_value) {
    if (flag_value != 0) {
        return flag_value;
    }
    if (const char* env = std::getenv("SEGT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) {
            return static_cast<unsigned>(v);
        }
    }
    return 1;
}

void emit(const std::string& key, const std::string& value) {
    std::cout << key << '=' << value << '\n';
}

std::string format_ms(double ms) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", ms);
    return buf;
}

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point start) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
}

// ---- voxelize -----------------------------------------------------------

struct VoxelizeArgs {
    std::string input, config, output;
    std::string format = "auto";
    unsigned stride = 5;
};

int cmd_voxelize(const VoxelizeArgs& args) {
    const segt::RunConfig config = load_config_or_defaults(args.config);

    std::string format = args.format;
    if (format == "auto") {
        format = args.input.size() >= 4 && args.input.substr(args.input.size() - 4) == ".csv"
                     ? "csv"
                     : "bin";
    }
    std::ifstream in(args.input, std::ios::binary);
    if (!in) {
        throw segt::io_error("cannot open input: " + args.input);
    }
    const segt::PointCloud cloud = format == "csv" ? segt::read_points_csv(in)
                                                   : segt::read_points_binary(in, args.stride);

    segt::VoxelizeStats stats;
    const segt::VoxelSet voxels = segt::voxelize(cloud, config.grid, &stats);
    segt::write_voxels_file(args.output, voxels);

    emit("n", std::to_string(voxels.size()));
    emit("c", std::to_string(voxels.channel_count));
    emit("dims_x", std::to_string(config.grid.dims[0]));
    emit("dims_y", std::to_string(config.grid.dims[1]));
    emit("dims_z", std::to_string(config.grid.dims[2]));
    emit("points", std::to_string(cloud.size()));
    emit("dropped", std::to_string(stats.dropped));
    return kExitOk;
}

// ---- serialize ----------------------------------------------------------

struct SerializeArgs {
    std::string input, config, output;
    std::string strategy = "+";
    unsigned threads = 0;
};

int cmd_serialize(const SerializeArgs& args) {
    const segt::RunConfig config = load_config_or_defaults(args.config);
    const segt::VoxelSet voxels = segt::read_voxels_file(args.input);
    const segt::Strategy strategy =
        args.strategy == "-" ? segt::Strategy::Minus : segt::Strategy::Plus;

    const segt::SerializationPlan plan =
        segt::serialize(voxels, strategy, config.expansion, resolve_threads(args.threads));

    std::ofstream out(args.output, std::ios::binary);
    if (!out) {
        throw segt::io_error("cannot open for writing: " + args.output);
    }
    segt::write_plan_csv(out, voxels, plan);

    emit("n", std::to_string(plan.size()));
    emit("strategy", args.strategy);
    emit("l_glb", std::to_string(config.expansion.l_glb));
    emit("l_lcl", std::to_string(config.expansion.l_lcl));
    return kExitOk;
}

// ---- curve --------------------------------------------------------------

struct CurveArgs {
    unsigned level = 1;
    unsigned dims = 2;
    std::string output;
    std::string svg;
};

int cmd_curve(const CurveArgs& args) {
    if (args.level < 1 || args.level > 8) {
        throw segt::config_error("curve dumps support level 1..8, got " +
                                 std::to_string(args.level));
    }
    if (args.dims != 2 && args.dims != 3) {
        throw segt::config_error("curve dims must be 2 or 3");
    }
    if (!args.svg.empty() && args.dims != 2) {
        throw segt::config_error("SVG rendering is only available for 2D curves");
    }

    std::ofstream out(args.output, std::ios::binary);
    if (!out) {
        throw segt::io_error("cannot open for writing: " + args.output);
    }
    segt::write_curve_csv(out, args.level, args.dims);

    if (!args.svg.empty()) {
        std::ofstream svg(args.svg, std::ios::binary);
        if (!svg) {
            throw segt::io_error("cannot open for writing: " + args.svg);
        }
        segt::write_curve_svg(svg, args.level);
    }

    emit("level", std::to_string(args.level));
    emit("dims", std::to_string(args.dims));
    emit("rows", std::to_string(std::uint64_t{1} << (args.dims * args.level)));
    return kExitOk;
}

// ---- encode -------------------------------------------------------------

struct EncodeArgs {
    std::string input, weights, config, output, save_weights;
    std::optional<std::uint64_t> seed;
    std::string init = "random";
    unsigned threads = 0;
};

template <class T>
int run_encode(const EncodeArgs& args, const segt::RunConfig& config,
               const segt::VoxelSet& voxels) {
    segt::EncoderParams<T> params;
    segt::RunConfig seeded = config;
    if (!args.weights.empty()) {
        std::ifstream in(args.weights, std::ios::binary);
        if (!in) {
            throw segt::io_error("cannot open weights: " + args.weights);
        }
        params = segt::load_params<T>(in);
    } else {
        if (args.seed.has_value()) {
            seeded.seed = *args.seed;
        }
        params = segt::init_params<T>(seeded, args.init == "identity"
                                                  ? segt::InitMode::identity
                                                  : segt::InitMode::random);
    }
    if (!args.save_weights.empty()) {
        std::ofstream out(args.save_weights, std::ios::binary);
        if (!out) {
            throw segt::io_error("cannot open for writing: " + args.save_weights);
        }
        segt::save_params(out, seeded, params);
    }

    if (voxels.channel_count != params.attention.channels) {
        throw segt::shape_error("input voxels have " + std::to_string(voxels.channel_count) +
                                " channels but the encoder expects " +
                                std::to_string(params.attention.channels));
    }

    segt::StageTimings timings;
    const segt::VoxelSet encoded =
        segt::encoder_forward(voxels, params, &timings, resolve_threads(args.threads));
    const segt::BevGrid bev = segt::bev_scatter(encoded);
    segt::write_bev_file(args.output, bev);

    emit("n", std::to_string(encoded.size()));
    emit("c", std::to_string(encoded.channel_count));
    for (std::size_t s = 0; s < segt::EncoderLayout::stages; ++s) {
        emit("stage" + std::to_string(s) + "_ms", format_ms(timings.stage_ms[s]));
    }
    emit("total_ms", format_ms(timings.total_ms));
    emit("precision", segt::precision_name(config.precision));
    return kExitOk;
}

int cmd_encode(const EncodeArgs& args) {
    segt::RunConfig config = load_config_or_defaults(args.config);
    const segt::VoxelSet voxels = segt::read_voxels_file(args.input);

    if (!args.weights.empty()) {
        // The weight file's embedded config drives shapes and precision; the
        // --config grid must agree with the voxel file's grid either way.
        config = segt::read_params_config_file(args.weights);
    }
    if (voxels.grid.dims != config.grid.dims) {
        throw segt::shape_error("voxel grid dims do not match config grid dims");
    }

    if (config.precision == segt::Precision::f32) {
        return run_encode<float>(args, config, voxels);
    }
    return run_encode<double>(args, config, voxels);
}

// ---- bench --------------------------------------------------------------

struct BenchArgs {
    std::size_t voxels = 10000;
    std::uint64_t seed = 0;
    std::string config;
    int repeat = 5;
    std::vector<std::string> ops = {"serialize", "attention", "layer"};
    unsigned threads = 0;
};

template <class T>
void bench_compute_ops(const BenchArgs& args, const segt::RunConfig& config,
                       const segt::VoxelSet& voxels, bool do_attention, bool do_layer,
                       unsigned threads) {
    const segt::EncoderParams<T> params = segt::init_params<T>(config);
    const segt::SerializationPlan plan =
        segt::serialize(voxels, segt::Strategy::Plus, config.expansion, threads);

    if (do_attention) {
        segt::Matrix<T> features(voxels.size(), voxels.channel_count);
        for (std::size_t i = 0; i < features.size(); ++i) {
            features.data()[i] = static_cast<T>(voxels.features[i]);
        }
        const segt::Matrix<T> f_z = segt::gather(features, plan);
        const std::vector<segt::VoxelCoord> coords_z =
            segt::gather(std::span<const segt::VoxelCoord>{voxels.coords}, plan);
        std::vector<double> laps;
        for (int r = 0; r < args.repeat; ++r) {
            const auto t0 = clock_type::now();
            const segt::Matrix<T> out = segt::group_attention_forward(
                f_z, std::span<const segt::VoxelCoord>{coords_z}, voxels.grid,
                params.attention, params.layers[0].attention);
            laps.push_back(ms_since(t0));
            if (out.rows() != voxels.size()) {
                throw segt::shape_error("bench: attention output shape mismatch");
            }
        }
        std::sort(laps.begin(), laps.end());
        emit("attention_min_ms", format_ms(laps.front()));
        emit("attention_median_ms", format_ms(laps[laps.size() / 2]));
    }

    if (do_layer) {
        std::vector<double> laps;
        for (int r = 0; r < args.repeat; ++r) {
            const auto t0 = clock_type::now();
            const segt::VoxelSet out = segt::segt_layer(
                voxels, segt::Strategy::Plus, params.layers[0], params.attention,
                config.expansion, threads);
            laps.push_back(ms_since(t0));
            if (out.size() != voxels.size()) {
                throw segt::shape_error("bench: layer output shape mismatch");
            }
        }
        std::sort(laps.begin(), laps.end());
        emit("layer_min_ms", format_ms(laps.front()));
        emit("layer_median_ms", format_ms(laps[laps.size() / 2]));
    }
}

int cmd_bench(const BenchArgs& args) {
    if (args.voxels < 1) {
        throw segt::config_error("bench needs at least one voxel");
    }
    if (args.repeat < 1) {
        throw segt::config_error("bench repeat must be >= 1");
    }
    segt::RunConfig config = load_config_or_defaults(args.config);
    config.seed = args.seed;
    const unsigned threads = resolve_threads(args.threads);

    bool do_serialize = false, do_attention = false, do_layer = false;
    for (const auto& op : args.ops) {
        if (op == "serialize") do_serialize = true;
        else if (op == "attention") do_attention = true;
        else if (op == "layer") do_layer = true;
        else throw segt::config_error("unknown bench op '" + op + "'");
    }

    const segt::VoxelSet voxels = segt::selftest::make_random_voxels(
        args.voxels, config.grid, config.channels, args.seed);

    emit("n", std::to_string(args.voxels));
    emit("repeat", std::to_string(args.repeat));
    emit("threads", std::to_string(threads));

    if (do_serialize) {
        std::vector<double> laps;
        for (int r = 0; r < args.repeat; ++r) {
            const auto t0 = clock_type::now();
            const segt::SerializationPlan plan =
                segt::serialize(voxels, segt::Strategy::Plus, config.expansion, threads);
            laps.push_back(ms_since(t0));
            if (plan.size() != voxels.size()) {
                throw segt::shape_error("bench: plan size mismatch");
            }
        }
        std::sort(laps.begin(), laps.end());
        emit("serialize_min_ms", format_ms(laps.front()));
        emit("serialize_median_ms", format_ms(laps[laps.size() / 2]));
    }

    if (do_attention || do_layer) {
        if (config.precision == segt::Precision::f32) {
            bench_compute_ops<float>(args, config, voxels, do_attention, do_layer, threads);
        } else {
            bench_compute_ops<double>(args, config, voxels, do_attention, do_layer, threads);
        }
    }
    return kExitOk;
}

// ---- selftest -----------------------------------------------------------

int cmd_selftest(bool corrupt_curve) {
    segt::selftest::SuiteOptions options;
    options.corrupt_curve_kernel = corrupt_curve;

    std::vector<std::string> failed;
    const auto results = segt::selftest::run_suite(options, [&](const auto& r) {
        emit("check_" + r.name, r.pass ? "pass" : "fail");
        std::cerr << (r.pass ? "    ok " : "  FAIL ") << r.name << " (" << format_ms(r.ms)
                  << " ms): " << r.detail << '\n';
        if (!r.pass) {
            failed.push_back(r.name);
        }
    });

    emit("checks", std::to_string(results.size()));
    if (!failed.empty()) {
        std::string joined;
        for (const auto& name : failed) {
            joined += joined.empty() ? name : "," + name;
        }
        emit("failed", joined);
        emit("result", "fail");
        return kExitSelftest;
    }
    emit("result", "pass");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatial-expansion group transformer encoder pipeline"};
    app.require_subcommand(1);

    VoxelizeArgs voxelize_args;
    auto* voxelize = app.add_subcommand("voxelize", "Point cloud file -> SEGV voxel set");
    voxelize->add_option("--input", voxelize_args.input, "Point file (flat f32 binary or CSV)")
        ->required();
    voxelize->add_option("--config", voxelize_args.config, "Config file (key = value lines)");
    voxelize->add_option("--output", voxelize_args.output, "Output SEGV path")->required();
    voxelize->add_option("--format", voxelize_args.format, "auto|bin|csv (default auto)")
        ->check(CLI::IsMember({"auto", "bin", "csv"}));
    voxelize->add_option("--stride", voxelize_args.stride,
                         "Floats per point for binary input (default 5)");

    SerializeArgs serialize_args;
    auto* serialize = app.add_subcommand("serialize", "SEGV -> serialized order CSV");
    serialize->add_option("--input", serialize_args.input, "Input SEGV path")->required();
    serialize->add_option("--strategy", serialize_args.strategy, "+ or - (default +)")
        ->check(CLI::IsMember({"+", "-"}));
    serialize->add_option("--config", serialize_args.config, "Config file");
    serialize->add_option("--output", serialize_args.output, "Output CSV path")->required();
    serialize->add_option("--threads", serialize_args.threads,
                          "Worker threads (default SEGT_THREADS or 1)");

    CurveArgs curve_args;
    auto* curve = app.add_subcommand("curve", "Dump a full space-filling curve");
    curve->add_option("--level", curve_args.level, "Curve level, 1..8")->required();
    curve->add_option("--dims", curve_args.dims, "2 or 3 (default 2)");
    curve->add_option("--output", curve_args.output, "Output CSV path")->required();
    curve->add_option("--svg", curve_args.svg, "Optional SVG polyline path (2D only)");

    EncodeArgs encode_args;
    auto* encode = app.add_subcommand("encode", "SEGV -> encoder -> SEGB BEV grid");
    encode->add_option("--input", encode_args.input, "Input SEGV path")->required();
    auto* weights_opt = encode->add_option("--weights", encode_args.weights, "SEGW weight file");
    encode->add_option("--seed", encode_args.seed, "Generate weights from this seed instead")
        ->excludes(weights_opt);
    encode->add_option("--init", encode_args.init, "random|identity for --seed weights")
        ->check(CLI::IsMember({"random", "identity"}));
    encode->add_option("--config", encode_args.config, "Config file");
    encode->add_option("--output", encode_args.output, "Output SEGB path")->required();
    encode->add_option("--save-weights", encode_args.save_weights,
                       "Also write the effective weights as SEGW");
    encode->add_option("--threads", encode_args.threads,
                       "Worker threads (default SEGT_THREADS or 1)");

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "Time serialize / attention / layer");
    bench->add_option("--voxels", bench_args.voxels, "Voxel count (default 10000)");
    bench->add_option("--seed", bench_args.seed, "Seed (default 0)");
    bench->add_option("--config", bench_args.config, "Config file");
    bench->add_option("--repeat", bench_args.repeat, "Repetitions (default 5)");
    bench->add_option("--ops", bench_args.ops,
                      "Subset of serialize,attention,layer (default all)")
        ->delimiter(',');
    bench->add_option("--threads", bench_args.threads,
                      "Worker threads (default SEGT_THREADS or 1)");

    bool corrupt_curve = false;
    auto* selftest = app.add_subcommand("selftest", "Run the embedded invariant suite");
    selftest->add_flag("--corrupt-curve", corrupt_curve,
                       "Test hook: corrupt the curve kernel to exercise failure paths")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e); // --help
        }
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (voxelize->parsed()) return cmd_voxelize(voxelize_args);
        if (serialize->parsed()) return cmd_serialize(serialize_args);
        if (curve->parsed()) return cmd_curve(curve_args);
        if (encode->parsed()) return cmd_encode(encode_args);
        if (bench->parsed()) return cmd_bench(bench_args);
        if (selftest->parsed()) return cmd_selftest(corrupt_curve);
    } catch (const segt::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const segt::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const segt::io_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const segt::shape_error& e) {
        std::cerr << "shape error: " << e.what() << '\n';
        return kExitShape;
    } catch (const segt::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitShape;
    } catch (const segt::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitOk;
}
