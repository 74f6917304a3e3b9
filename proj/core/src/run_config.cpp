// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#include "segt/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "segt/errors.hpp"
#include "segt/hilbert.hpp"

namespace segt {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_double(std::string_view value, const std::string& key, int line) {
    double out = 0.0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw config_error("line " + std::to_string(line) + ": invalid number for " + key +
                           ": '" + std::string(value) + "'");
    }
    return out;
}

std::uint64_t parse_u64(std::string_view value, const std::string& key, int line) {
    std::uint64_t out = 0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw config_error("line " + std::to_string(line) + ": invalid integer for " + key +
                           ": '" + std::string(value) + "'");
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

const char* precision_name(Precision p) {
    return p == Precision::f32 ? "f32" : "f64";
}

RunConfig RunConfig::defaults() {
    RunConfig c;
    c.grid = GridSpec::create({-54.0, -54.0, -5.0}, {54.0, 54.0, 3.0}, {0.28125, 0.28125, 8.0});
    c.expansion.l_glb = 6;
    c.expansion.l_lcl = ExpansionConfig::derive_l_lcl(c.grid, c.expansion.l_glb);
    return c;
}

void RunConfig::validate() const {
    expansion.validate();
    if (group_size == 0) {
        throw config_error("group_size must be >= 1");
    }
    if (channels == 0) {
        throw config_error("channels must be >= 1");
    }
    if (heads == 0 || channels % heads != 0) {
        throw config_error("heads must divide channels");
    }
    expansion.validate_covers(grid);
}

RunConfig parse_config(std::string_view text) {
    std::array<double, 3> range_min = {-54.0, -54.0, -5.0};
    std::array<double, 3> range_max = {54.0, 54.0, 3.0};
    std::array<double, 3> voxel_size = {0.28125, 0.28125, 8.0};
    RunConfig config;
    std::optional<std::uint64_t> l_lcl_override;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw config_error("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key{trim(line.substr(0, eq))};
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw config_error("line " + std::to_string(line_no) + ": empty key or value");
        }

        if (key == "range_min_x") range_min[0] = parse_double(value, key, line_no);
        else if (key == "range_min_y") range_min[1] = parse_double(value, key, line_no);
        else if (key == "range_min_z") range_min[2] = parse_double(value, key, line_no);
        else if (key == "range_max_x") range_max[0] = parse_double(value, key, line_no);
        else if (key == "range_max_y") range_max[1] = parse_double(value, key, line_no);
        else if (key == "range_max_z") range_max[2] = parse_double(value, key, line_no);
        else if (key == "voxel_size_x") voxel_size[0] = parse_double(value, key, line_no);
        else if (key == "voxel_size_y") voxel_size[1] = parse_double(value, key, line_no);
        else if (key == "voxel_size_z") voxel_size[2] = parse_double(value, key, line_no);
        else if (key == "l_glb") config.expansion.l_glb = static_cast<unsigned>(parse_u64(value, key, line_no));
        else if (key == "l_lcl") l_lcl_override = parse_u64(value, key, line_no);
        else if (key == "group_size") config.group_size = parse_u64(value, key, line_no);
        else if (key == "channels") config.channels = parse_u64(value, key, line_no);
        else if (key == "heads") config.heads = parse_u64(value, key, line_no);
        else if (key == "seed") config.seed = parse_u64(value, key, line_no);
        else if (key == "precision") {
            if (value == "f32") config.precision = Precision::f32;
            else if (value == "f64") config.precision = Precision::f64;
            else throw config_error("line " + std::to_string(line_no) +
                                    ": precision must be f32 or f64, got '" + std::string(value) +
                                    "'");
        } else {
            throw config_error("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }

    config.grid = GridSpec::create(range_min, range_max, voxel_size);
    if (l_lcl_override.has_value()) {
        if (*l_lcl_override > hilbert::kMaxLevel) {
            throw config_error("l_lcl must be in [0, " + std::to_string(hilbert::kMaxLevel) +
                               "], got " + std::to_string(*l_lcl_override));
        }
        config.expansion.l_lcl = static_cast<unsigned>(*l_lcl_override);
    } else {
        config.expansion.l_lcl = ExpansionConfig::derive_l_lcl(config.grid, config.expansion.l_glb);
    }
    config.validate();
    return config;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open config file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string config_echo(const RunConfig& c) {
    std::string out;
    auto emit = [&out](const std::string& key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    emit("range_min_x", format_double(c.grid.range_min[0]));
    emit("range_min_y", format_double(c.grid.range_min[1]));
    emit("range_min_z", format_double(c.grid.range_min[2]));
    emit("range_max_x", format_double(c.grid.range_max[0]));
    emit("range_max_y", format_double(c.grid.range_max[1]));
    emit("range_max_z", format_double(c.grid.range_max[2]));
    emit("voxel_size_x", format_double(c.grid.voxel_size[0]));
    emit("voxel_size_y", format_double(c.grid.voxel_size[1]));
    emit("voxel_size_z", format_double(c.grid.voxel_size[2]));
    emit("l_glb", std::to_string(c.expansion.l_glb));
    emit("l_lcl", std::to_string(c.expansion.l_lcl));
    emit("group_size", std::to_string(c.group_size));
    emit("channels", std::to_string(c.channels));
    emit("heads", std::to_string(c.heads));
    emit("seed", std::to_string(c.seed));
    emit("precision", precision_name(c.precision));
    return out;
}

} // namespace segt
