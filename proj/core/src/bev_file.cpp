// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#include "segt/bev_file.hpp"

#include <cstdio>
#include <fstream>

#include "segt/binary_io.hpp"
#include "segt/errors.hpp"

namespace segt {

void write_bev(std::ostream& os, const BevGrid& bev) {
    detail::write_magic(os, "SEGB");
    detail::write_raw(os, std::uint16_t{1});
    detail::write_raw(os, bev.grid.dims[0]);
    detail::write_raw(os, bev.grid.dims[1]);
    detail::write_raw(os, static_cast<std::uint32_t>(bev.channels));
    for (const double v : bev.values) {
        detail::write_raw(os, static_cast<float>(v));
    }
    if (!os) {
        throw io_error("write_bev: write failure");
    }
}

void write_bev_file(const std::string& path, const BevGrid& bev) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw io_error("cannot open for writing: " + path);
    }
    write_bev(os, bev);
}

BevData read_bev(std::istream& is) {
    detail::expect_magic(is, "SEGB", "SEGB");
    detail::expect_version(is, 1, "SEGB");
    BevData data;
    data.dims_x = detail::read_raw<std::uint32_t>(is, "bev dims_x");
    data.dims_y = detail::read_raw<std::uint32_t>(is, "bev dims_y");
    data.channels = detail::read_raw<std::uint32_t>(is, "bev channels");
    const std::size_t count =
        static_cast<std::size_t>(data.dims_x) * data.dims_y * data.channels;
    data.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        data.values[i] = detail::read_raw<float>(is, "bev value");
    }
    return data;
}

BevData read_bev_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw io_error("cannot open BEV file: " + path);
    }
    return read_bev(is);
}

void write_bev_channel_csv(std::ostream& os, const BevGrid& bev, std::size_t channel) {
    if (channel >= bev.channels) {
        throw shape_error("bev channel " + std::to_string(channel) + " out of range");
    }
    os << "x,y,value\n";
    char buf[64];
    for (std::uint32_t x = 0; x < bev.grid.dims[0]; ++x) {
        for (std::uint32_t y = 0; y < bev.grid.dims[1]; ++y) {
            std::snprintf(buf, sizeof(buf), "%u,%u,%.17g\n", x, y, bev.cell(x, y)[channel]);
            os << buf;
        }
    }
}

} // namespace segt
