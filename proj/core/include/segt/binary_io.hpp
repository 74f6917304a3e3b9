// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

#include "segt/errors.hpp"

namespace segt::detail {

// All containers are little-endian on disk. The readers/writers below go
// through byte copies of fixed-width types; on a big-endian host they would
// need swaps, which this project does not target.
static_assert(std::endian::native == std::endian::little,
              "binary containers assume a little-endian host");

template <class T>
void write_raw(std::ostream& os, const T& value) {
    static_assert(std::is_trivially_copyable_v<T>);
    os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T read_raw(std::istream& is, const char* what) {
    static_assert(std::is_trivially_copyable_v<T>);
    T value{};
    is.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!is) {
        throw io_error(std::string("truncated file while reading ") + what);
    }
    return value;
}

inline void write_magic(std::ostream& os, const char magic[4]) {
    os.write(magic, 4);
}

inline void expect_magic(std::istream& is, const char magic[4], const char* format_name) {
    char buf[4] = {};
    is.read(buf, 4);
    if (!is || std::memcmp(buf, magic, 4) != 0) {
        throw io_error(std::string("not a ") + format_name + " file (bad magic)");
    }
}

inline void expect_version(std::istream& is, std::uint16_t expected, const char* format_name) {
    const auto v = read_raw<std::uint16_t>(is, "version");
    if (v != expected) {
        throw io_error(std::string(format_name) + ": unsupported version " + std::to_string(v));
    }
}

} // namespace segt::detail
