// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#include "segt/voxel_file.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "segt/binary_io.hpp"
#include "segt/errors.hpp"

namespace segt {

void write_voxels(std::ostream& os, const VoxelSet& voxels) {
    detail::write_magic(os, "SEGV");
    detail::write_raw(os, std::uint16_t{1});
    detail::write_raw(os, static_cast<std::uint64_t>(voxels.size()));
    detail::write_raw(os, static_cast<std::uint16_t>(voxels.channel_count));
    for (int a = 0; a < 3; ++a) detail::write_raw(os, voxels.grid.dims[a]);
    for (int a = 0; a < 3; ++a) detail::write_raw(os, voxels.grid.range_min[a]);
    for (int a = 0; a < 3; ++a) detail::write_raw(os, voxels.grid.range_max[a]);
    for (int a = 0; a < 3; ++a) detail::write_raw(os, voxels.grid.voxel_size[a]);
    for (const auto& c : voxels.coords) {
        for (int a = 0; a < 3; ++a) detail::write_raw(os, c[a]);
    }
    for (const double f : voxels.features) {
        detail::write_raw(os, static_cast<float>(f));
    }
    if (!os) {
        throw io_error("write_voxels: write failure");
    }
}

VoxelSet read_voxels(std::istream& is) {
    detail::expect_magic(is, "SEGV", "SEGV");
    detail::expect_version(is, 1, "SEGV");
    const auto n = detail::read_raw<std::uint64_t>(is, "voxel count");
    const auto channels = detail::read_raw<std::uint16_t>(is, "channel count");
    std::array<std::uint32_t, 3> dims{};
    std::array<double, 3> range_min{}, range_max{}, voxel_size{};
    for (int a = 0; a < 3; ++a) dims[a] = detail::read_raw<std::uint32_t>(is, "grid dims");
    for (int a = 0; a < 3; ++a) range_min[a] = detail::read_raw<double>(is, "grid range_min");
    for (int a = 0; a < 3; ++a) range_max[a] = detail::read_raw<double>(is, "grid range_max");
    for (int a = 0; a < 3; ++a) voxel_size[a] = detail::read_raw<double>(is, "grid voxel_size");

    VoxelSet out;
    out.grid = GridSpec::create(range_min, range_max, voxel_size);
    if (out.grid.dims != dims) {
        throw io_error("SEGV: stored dims do not match the stored grid geometry");
    }
    if (channels < 3) {
        throw io_error("SEGV: channel count must be at least 3");
    }
    out.channel_count = channels;

    out.coords.resize(n);
    std::set<VoxelCoord> seen;
    for (std::uint64_t i = 0; i < n; ++i) {
        VoxelCoord c{};
        for (int a = 0; a < 3; ++a) {
            c[a] = detail::read_raw<std::uint32_t>(is, "voxel coord");
            if (c[a] >= out.grid.dims[a]) {
                throw io_error("SEGV: coordinate out of grid at row " + std::to_string(i));
            }
        }
        if (!seen.insert(c).second) {
            throw io_error("SEGV: duplicate voxel coordinate at row " + std::to_string(i));
        }
        out.coords[i] = c;
    }
    out.features.resize(n * channels);
    for (std::size_t i = 0; i < out.features.size(); ++i) {
        out.features[i] = detail::read_raw<float>(is, "voxel feature");
    }
    return out;
}

void write_voxels_file(const std::string& path, const VoxelSet& voxels) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw io_error("cannot open for writing: " + path);
    }
    write_voxels(os, voxels);
}

VoxelSet read_voxels_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw io_error("cannot open voxel file: " + path);
    }
    return read_voxels(is);
}

PointCloud read_points_binary(std::istream& is, std::size_t stride) {
    if (stride < 3) {
        throw config_error("point stride must be at least 3 (x, y, z), got " +
                           std::to_string(stride));
    }
    std::vector<char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    if (bytes.size() % (4 * stride) != 0) {
        throw io_error("binary point file size " + std::to_string(bytes.size()) +
                       " is not a multiple of " + std::to_string(4 * stride) +
                       " (stride " + std::to_string(stride) + ")");
    }
    const std::size_t count = bytes.size() / (4 * stride);
    PointCloud cloud;
    cloud.extra_count = stride - 3;
    cloud.values.resize(count * stride);
    const auto* floats = reinterpret_cast<const float*>(bytes.data());
    for (std::size_t i = 0; i < count * stride; ++i) {
        cloud.values[i] = static_cast<double>(floats[i]);
    }
    return cloud;
}

PointCloud read_points_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) {
        throw io_error("CSV point file: missing header");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    std::vector<std::string> fields;
    {
        std::stringstream header(line);
        std::string field;
        while (std::getline(header, field, ',')) {
            fields.push_back(field);
        }
    }
    if (fields.size() < 3 || fields[0] != "x" || fields[1] != "y" || fields[2] != "z") {
        throw io_error("CSV point file: header must start with x,y,z");
    }

    PointCloud cloud;
    cloud.extra_count = fields.size() - 3;
    const std::size_t stride = cloud.stride();

    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::size_t pos = 0;
        for (std::size_t f = 0; f < stride; ++f) {
            const std::size_t comma = f + 1 < stride ? line.find(',', pos) : line.size();
            if (comma == std::string::npos) {
                throw io_error("CSV point file line " + std::to_string(line_no) +
                               ": expected " + std::to_string(stride) + " fields");
            }
            double value = 0.0;
            const char* begin = line.data() + pos;
            const char* end = line.data() + comma;
            auto [ptr, ec] = std::from_chars(begin, end, value);
            if (ec != std::errc{} || ptr != end) {
                throw io_error("CSV point file line " + std::to_string(line_no) +
                               ": invalid number in field " + std::to_string(f));
            }
            cloud.values.push_back(value);
            pos = comma + 1;
        }
    }
    return cloud;
}

} // namespace segt
