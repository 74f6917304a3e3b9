// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#include "segt/selftest/reference_curves.hpp"

#include <bit>

namespace segt::selftest {

namespace {

std::uint32_t mask_rotl(std::uint32_t b, unsigned s, unsigned dim) {
    s %= dim;
    const std::uint32_t mask = (1u << dim) - 1u;
    return ((b << s) | (b >> (dim - s))) & mask;
}

std::uint32_t gray(std::uint32_t w) { return w ^ (w >> 1); }

std::uint32_t entry_corner(std::uint32_t w) {
    return w == 0 ? 0u : gray(2u * ((w - 1u) / 2u));
}

unsigned travel_axis(std::uint32_t w, unsigned dim) {
    if (w == 0) {
        return 0;
    }
    const std::uint32_t ref = (w % 2 == 0) ? w - 1u : w;
    return static_cast<unsigned>(std::countr_one(ref)) % dim;
}

void emit(unsigned level, unsigned dim, std::uint32_t e, unsigned d, std::vector<Cell>& out) {
    if (level == 0) {
        out.push_back(Cell{0, 0, 0});
        return;
    }
    for (std::uint32_t w = 0; w < (1u << dim); ++w) {
        const std::uint32_t corner = mask_rotl(gray(w), d + 1, dim) ^ e;
        const std::uint32_t e_child = e ^ mask_rotl(entry_corner(w), d + 1, dim);
        const unsigned d_child = (d + travel_axis(w, dim) + 1) % dim;
        const std::size_t first = out.size();
        emit(level - 1, dim, e_child, d_child, out);
        for (std::size_t i = first; i < out.size(); ++i) {
            for (unsigned j = 0; j < dim; ++j) {
                out[i][j] |= ((corner >> j) & 1u) << (level - 1);
            }
        }
    }
}

} // namespace

std::vector<Cell> reference_curve(unsigned level, unsigned dim) {
    std::vector<Cell> out;
    out.reserve(std::size_t{1} << (static_cast<std::size_t>(dim) * level));
    emit(level, dim, 0, 0, out);
    return out;
}

std::vector<Cell> quadrant_curve_2d(unsigned level) {
    if (level == 0) {
        return {Cell{0, 0, 0}};
    }
    const std::vector<Cell> prev = quadrant_curve_2d(level - 1);
    const std::uint32_t half = 1u << (level - 1);
    std::vector<Cell> out;
    out.reserve(prev.size() * 4);
    for (const auto& c : prev) out.push_back(Cell{c[1], c[0], 0});
    for (const auto& c : prev) out.push_back(Cell{c[0], c[1] + half, 0});
    for (const auto& c : prev) out.push_back(Cell{c[0] + half, c[1] + half, 0});
    for (const auto& c : prev) out.push_back(Cell{half - 1 - c[1] + half, half - 1 - c[0], 0});
    return out;
}

} // namespace segt::selftest
