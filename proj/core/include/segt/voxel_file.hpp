// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "segt/point_cloud.hpp"
#include "segt/voxel_set.hpp"

namespace segt {

/// SEGV voxel container: magic "SEGV", u16 version, u64 N, u16 C,
/// u32 dims[3], f64 range_min[3], f64 range_max[3], f64 voxel_size[3],
/// then N coordinate triples (u32 x, y, z), then N*C features as
/// little-endian f32 row-major.
void write_voxels(std::ostream& os, const VoxelSet& voxels);
VoxelSet read_voxels(std::istream& is);
void write_voxels_file(const std::string& path, const VoxelSet& voxels);
VoxelSet read_voxels_file(const std::string& path);

/// Flat binary point reader: little-endian f32, `stride` floats per point,
/// x, y, z first, extras after. File size must be a multiple of 4*stride.
PointCloud read_points_binary(std::istream& is, std::size_t stride);

/// CSV point reader: header must start with x,y,z; remaining header fields
/// name the extras.
PointCloud read_points_csv(std::istream& is);

} // namespace segt
