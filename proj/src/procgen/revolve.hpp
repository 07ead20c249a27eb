// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Internal helpers shared by primitives and vessels: surfaces of revolution about +y
// whose rings are bit-identical wherever two parts meet.

#include <functional>
#include <vector>

#include "matforge/procgen/mesh.hpp"

namespace matforge::procgen::detail {

/// cos/sin of 2 pi i / segments for i in [0, segments]; the last entry repeats the first exactly.
struct RingTable {
    std::vector<float> c, s;
    explicit RingTable(int segments);
    int segments() const { return static_cast<int>(c.size()) - 1; }
    Vec3 point(float radius, float y, int i) const { return {radius * c[i], y, radius * s[i]}; }
};

/// Side surface between heights y0 and y1 (rows + 1 rings). `outward` selects whether
/// normals and winding face away from the axis.
Mesh revolve_side(const std::function<float(float)>& radius_at_y, float y0, float y1, int rows, const RingTable& ring,
                  bool outward);

/// Flat disc at height y closing a ring of the given radius; faces +y when `up`.
Mesh revolve_cap(float radius, float y, const RingTable& ring, bool up);

/// Flat annulus at height y between two radii, facing +y.
Mesh revolve_annulus(float r_outer, float r_inner, float y, const RingTable& ring);

}  // namespace matforge::procgen::detail
