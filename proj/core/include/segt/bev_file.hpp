// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>

#include "segt/bev.hpp"

namespace segt {

/// SEGB container: magic "SEGB", u16 version, u32 dims_x, u32 dims_y,
/// u32 channels, then dims_x*dims_y*channels little-endian f32 values,
/// x-major (x outermost, channel innermost). The grid geometry is not
/// stored; pair the file with its config.
void write_bev(std::ostream& os, const BevGrid& bev);
void write_bev_file(const std::string& path, const BevGrid& bev);

struct BevData {
    std::uint32_t dims_x = 0, dims_y = 0, channels = 0;
    std::vector<float> values;
};
BevData read_bev(std::istream& is);
BevData read_bev_file(const std::string& path);

/// One channel as CSV (header x,y,value), for quick inspection.
void write_bev_channel_csv(std::ostream& os, const BevGrid& bev, std::size_t channel);

} // namespace segt
