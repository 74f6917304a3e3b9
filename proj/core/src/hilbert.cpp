// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#include "segt/hilbert.hpp"

#include <bit>
#include <string>

#include "segt/errors.hpp"

namespace segt::hilbert {
namespace {

std::uint32_t rotl_bits(std::uint32_t b, unsigned s, unsigned dim) {
    s %= dim;
    const std::uint32_t mask = (1u << dim) - 1u;
    return ((b << s) | (b >> (dim - s))) & mask;
}

std::uint32_t rotr_bits(std::uint32_t b, unsigned s, unsigned dim) {
    s %= dim;
    const std::uint32_t mask = (1u << dim) - 1u;
    return ((b >> s) | (b << (dim - s))) & mask;
}

std::uint32_t gray(std::uint32_t w) { return w ^ (w >> 1); }

std::uint32_t gray_inverse(std::uint32_t g) {
    std::uint32_t w = g;
    for (std::uint32_t m = w >> 1; m != 0; m >>= 1) {
        w ^= m;
    }
    return w;
}

// Corner where the curve enters subcube w of the parent cell.
std::uint32_t entry_point(std::uint32_t w) {
    return w == 0 ? 0u : gray(2u * ((w - 1u) / 2u));
}

// Axis along which the curve travels inside subcube w.
unsigned travel_direction(std::uint32_t w, unsigned dim) {
    if (w == 0) {
        return 0;
    }
    const std::uint32_t ref = (w % 2 == 0) ? w - 1u : w;
    return static_cast<unsigned>(std::countr_one(ref)) % dim;
}

void check_args(unsigned level, unsigned dim) {
    if (dim != 2 && dim != 3) {
        throw domain_error("hilbert: dim must be 2 or 3, got " + std::to_string(dim));
    }
    if (level > kMaxLevel) {
        throw domain_error("hilbert: level must be <= " + std::to_string(kMaxLevel) + ", got " +
                           std::to_string(level));
    }
}

} // namespace

std::uint64_t encode(std::span<const std::uint32_t> coord, unsigned level, unsigned dim) {
    check_args(level, dim);
    if (coord.size() < dim) {
        throw domain_error("hilbert: coordinate has fewer components than dim");
    }
    const std::uint32_t extent_mask = level >= 32 ? ~0u : ((1u << level) - 1u);
    for (unsigned j = 0; j < dim; ++j) {
        if (coord[j] > extent_mask) {
            throw domain_error("hilbert: coordinate component " + std::to_string(j) + " = " +
                               std::to_string(coord[j]) + " out of range for level " +
                               std::to_string(level));
        }
    }

    std::uint64_t h = 0;
    std::uint32_t e = 0;
    unsigned d = 0;
    for (unsigned i = level; i-- > 0;) {
        std::uint32_t l = 0;
        for (unsigned j = 0; j < dim; ++j) {
            l |= ((coord[j] >> i) & 1u) << j;
        }
        l = rotr_bits(l ^ e, d + 1, dim);
        const std::uint32_t w = gray_inverse(l);
        h = (h << dim) | w;
        e = e ^ rotl_bits(entry_point(w), d + 1, dim);
        d = (d + travel_direction(w, dim) + 1) % dim;
    }
    return h;
}

void decode(std::uint64_t index, unsigned level, unsigned dim, std::span<std::uint32_t> coord_out) {
    check_args(level, dim);
    if (coord_out.size() < dim) {
        throw domain_error("hilbert: output span has fewer components than dim");
    }
    if (level * dim < 64 && index >= (std::uint64_t{1} << (level * dim))) {
        throw domain_error("hilbert: index " + std::to_string(index) + " out of range for level " +
                           std::to_string(level));
    }

    for (unsigned j = 0; j < dim; ++j) {
        coord_out[j] = 0;
    }
    std::uint32_t e = 0;
    unsigned d = 0;
    const std::uint32_t w_mask = (1u << dim) - 1u;
    for (unsigned i = level; i-- > 0;) {
        const auto w = static_cast<std::uint32_t>((index >> (i * dim)) & w_mask);
        const std::uint32_t l = rotl_bits(gray(w), d + 1, dim) ^ e;
        for (unsigned j = 0; j < dim; ++j) {
            coord_out[j] |= ((l >> j) & 1u) << i;
        }
        e = e ^ rotl_bits(entry_point(w), d + 1, dim);
        d = (d + travel_direction(w, dim) + 1) % dim;
    }
}

std::uint64_t encode2(std::uint32_t x, std::uint32_t y, unsigned level) {
    const std::uint32_t c[2] = {x, y};
    return encode({c, 2}, level, 2);
}

std::uint64_t encode3(std::uint32_t x, std::uint32_t y, std::uint32_t z, unsigned level) {
    const std::uint32_t c[3] = {x, y, z};
    return encode({c, 3}, level, 3);
}

} // namespace segt::hilbert
