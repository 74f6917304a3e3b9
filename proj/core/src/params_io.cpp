// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#include "segt/params_io.hpp"

#include <fstream>

namespace segt {
namespace detail {

void write_run_config(std::ostream& os, const RunConfig& config) {
    for (int a = 0; a < 3; ++a) write_raw(os, config.grid.range_min[a]);
    for (int a = 0; a < 3; ++a) write_raw(os, config.grid.range_max[a]);
    for (int a = 0; a < 3; ++a) write_raw(os, config.grid.voxel_size[a]);
    for (int a = 0; a < 3; ++a) write_raw(os, config.grid.dims[a]);
    write_raw(os, static_cast<std::uint16_t>(config.expansion.l_glb));
    write_raw(os, static_cast<std::uint16_t>(config.expansion.l_lcl));
    write_raw(os, static_cast<std::uint32_t>(config.group_size));
    write_raw(os, static_cast<std::uint32_t>(config.channels));
    write_raw(os, static_cast<std::uint32_t>(config.heads));
    write_raw(os, config.seed);
    write_raw(os, static_cast<std::uint8_t>(config.precision));
}

RunConfig read_run_config(std::istream& is) {
    std::array<double, 3> range_min{};
    std::array<double, 3> range_max{};
    std::array<double, 3> voxel_size{};
    std::array<std::uint32_t, 3> dims{};
    for (int a = 0; a < 3; ++a) range_min[a] = read_raw<double>(is, "grid range_min");
    for (int a = 0; a < 3; ++a) range_max[a] = read_raw<double>(is, "grid range_max");
    for (int a = 0; a < 3; ++a) voxel_size[a] = read_raw<double>(is, "grid voxel_size");
    for (int a = 0; a < 3; ++a) dims[a] = read_raw<std::uint32_t>(is, "grid dims");

    RunConfig config;
    config.grid = GridSpec::create(range_min, range_max, voxel_size);
    if (config.grid.dims != dims) {
        throw io_error("config header: stored grid dims do not match the stored geometry");
    }
    config.expansion.l_glb = read_raw<std::uint16_t>(is, "l_glb");
    config.expansion.l_lcl = read_raw<std::uint16_t>(is, "l_lcl");
    config.group_size = read_raw<std::uint32_t>(is, "group_size");
    config.channels = read_raw<std::uint32_t>(is, "channels");
    config.heads = read_raw<std::uint32_t>(is, "heads");
    config.seed = read_raw<std::uint64_t>(is, "seed");
    const auto precision = read_raw<std::uint8_t>(is, "precision");
    if (precision > 1) {
        throw io_error("config header: invalid precision flag");
    }
    config.precision = static_cast<Precision>(precision);
    config.validate();
    return config;
}

} // namespace detail

RunConfig read_params_config(std::istream& is) {
    detail::expect_magic(is, "SEGW", "SEGW");
    detail::expect_version(is, 1, "SEGW");
    return detail::read_run_config(is);
}

RunConfig read_params_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open weights file: " + path);
    }
    return read_params_config(in);
}

} // namespace segt
