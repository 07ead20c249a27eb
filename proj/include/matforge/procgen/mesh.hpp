// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "matforge/core/vec.hpp"

namespace matforge::procgen {

using Triangle = std::array<std::uint32_t, 3>;

struct Bounds {
    Vec3 lo{1e30f, 1e30f, 1e30f};
    Vec3 hi{-1e30f, -1e30f, -1e30f};
    void extend(Vec3 p) {
        lo = min(lo, p);
        hi = max(hi, p);
    }
    Vec3 center() const { return (lo + hi) * 0.5f; }
    Vec3 extent() const { return hi - lo; }
};

struct BoundingSphere {
    Vec3 center;
    float radius = 0;
};

/// Indexed triangle mesh in metres. Triangles wind counter-clockwise seen from the
/// side the vertex normals point to.
struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    std::vector<Vec2> uv;
    std::vector<Vec3> normals;
    bool watertight = false;

    /// Index validity, attribute counts, uv in [0,1]^2 and unit normals (1e-4).
    void validate() const;
    Bounds bounds() const;
    /// Box-centred sphere enclosing every vertex.
    BoundingSphere bounding_sphere() const;
    std::size_t triangle_count() const { return triangles.size(); }

    /// Appends `other`, offsetting its indices.
    void append(const Mesh& other);
};

/// Applies `xf` to positions and the inverse transpose to normals.
Mesh transformed(const Mesh& mesh, const Affine& xf);

/// Every edge, after welding vertices with identical positions, is shared by exactly two triangles.
bool is_watertight(const Mesh& mesh);

/// Fraction of triangles whose geometric normal agrees with the mean of their vertex normals.
double orientation_agreement(const Mesh& mesh);

/// Area-weighted vertex normals, averaged across vertices that share a position.
void compute_smooth_normals(Mesh& mesh);

/// Wavefront OBJ with positions, texture coordinates and normals.
void write_obj(const std::filesystem::path& path, const Mesh& mesh);

}  // namespace matforge::procgen
