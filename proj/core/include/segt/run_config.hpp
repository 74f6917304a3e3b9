// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "segt/attention.hpp"
#include "segt/grid.hpp"
#include "segt/serialization.hpp"

namespace segt {

enum class Precision : std::uint8_t { f32 = 0, f64 = 1 };

const char* precision_name(Precision p);

/// Everything needed to reproduce a run: grid geometry, expansion levels,
/// attention geometry, seed, and scalar precision.
///
/// Defaults: detection range +-54 m in x/y and [-5, 3] m in z, voxel size
/// (0.28125, 0.28125, 8.0) giving a 384 x 384 x 1 grid; l_glb = 6 with
/// l_lcl derived so the curve covers the grid (3 for the default grid);
/// group_size = 128; channels = 128; heads = 8; seed = 0; f64.
struct RunConfig {
    GridSpec grid;
    ExpansionConfig expansion;
    std::size_t group_size = 128;
    std::size_t channels = 128;
    std::size_t heads = 8;
    std::uint64_t seed = 0;
    Precision precision = Precision::f64;

    static RunConfig defaults();

    AttentionConfig attention_config() const {
        return AttentionConfig{channels, heads, group_size};
    }

    /// Cross-field validation; throws config_error naming the field.
    void validate() const;
};

/// Parses `key = value` lines ('#' starts a comment). Unknown keys are
/// rejected with their line number; missing keys take the defaults above;
/// when l_lcl is not given it is derived from the grid and l_glb.
RunConfig parse_config(std::string_view text);

/// Reads and parses a config file.
RunConfig load_config_file(const std::string& path);

/// Canonical echo of the effective config: fixed key order and number
/// formatting, byte-for-byte reproducible, reparseable.
std::string config_echo(const RunConfig& config);

} // namespace segt
