// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

#include "segt/serialization.hpp"
#include "segt/voxel_set.hpp"

namespace segt {

/// Full curve at the given level as CSV rows index,x,y,z (z is 0 in 2D).
void write_curve_csv(std::ostream& os, unsigned level, unsigned dim);

/// 2D curve as an SVG polyline through cell centers. Coordinates are in
/// cell units (consecutive points are exactly 1 apart); y grows downward
/// per SVG convention.
void write_curve_svg(std::ostream& os, unsigned level);

/// Serialized ordering as CSV rows rank,voxel_row,global_key,local_key,x,y,z
/// with the voxel's native coordinates.
void write_plan_csv(std::ostream& os, const VoxelSet& voxels, const SerializationPlan& plan);

} // namespace segt
