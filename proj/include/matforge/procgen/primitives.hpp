// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

#include "matforge/procgen/mesh.hpp"

namespace matforge::procgen {

enum class PrimitiveKind { Sphere, Box, Torus, Superellipsoid, RevolvedProfile };

std::string_view primitive_name(PrimitiveKind kind);

/// Unit-size shape before the random per-axis scale.
Mesh make_superellipsoid(float e1, float e2, int segments = 48, int rings = 24);
Mesh make_sphere(int segments = 48, int rings = 24);
Mesh make_box(Vec3 half_extent);
Mesh make_torus(float major_radius, float minor_radius, int segments = 48, int rings = 24);

/// Closed solid of revolution about +y with radius(v), v in [0,1] from bottom (y=0) to top (y=height).
Mesh make_revolved_solid(const std::function<float(float)>& radius, float height, int rows = 32, int segments = 48);

struct PrimitiveObject {
    PrimitiveKind kind = PrimitiveKind::Sphere;
    Vec3 scale{1, 1, 1};
    float exponent1 = 1, exponent2 = 1;  // superellipsoid only
    Mesh mesh;
};

/// Uniform pick among the five shape families with a random per-axis scale in [0.5, 2].
PrimitiveObject generate_primitive_object(std::uint64_t seed);

}  // namespace matforge::procgen
