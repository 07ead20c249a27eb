// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/procgen/primitives.hpp"

#include <cmath>

#include "matforge/core/error.hpp"
#include "matforge/core/rng.hpp"
#include "revolve.hpp"

namespace matforge::procgen {
namespace {

float signed_pow(float v, float e) { return std::copysign(std::pow(std::fabs(v), e), v); }

bool same_position(const Mesh& m, std::uint32_t a, std::uint32_t b) { return m.vertices[a] == m.vertices[b]; }

// Two triangles per grid cell, skipping those collapsed at poles.
void grid_triangles(Mesh& m, int rows, int cols) {
    auto idx = [&](int j, int i) { return static_cast<std::uint32_t>(j * (cols + 1) + i); };
    for (int j = 0; j < rows; ++j) {
        for (int i = 0; i < cols; ++i) {
            std::uint32_t a = idx(j, i), b = idx(j + 1, i), c = idx(j + 1, i + 1), d = idx(j, i + 1);
            if (!same_position(m, a, b) && !same_position(m, b, c) && !same_position(m, a, c))
                m.triangles.push_back({a, b, c});
            if (!same_position(m, a, c) && !same_position(m, c, d) && !same_position(m, a, d))
                m.triangles.push_back({a, c, d});
        }
    }
}

}  // namespace

std::string_view primitive_name(PrimitiveKind kind) {
    switch (kind) {
        case PrimitiveKind::Sphere: return "sphere";
        case PrimitiveKind::Box: return "box";
        case PrimitiveKind::Torus: return "torus";
        case PrimitiveKind::Superellipsoid: return "superellipsoid";
        case PrimitiveKind::RevolvedProfile: return "revolved";
    }
    return "unknown";
}

Mesh make_superellipsoid(float e1, float e2, int segments, int rings) {
    if (e1 <= 0 || e2 <= 0 || segments < 3 || rings < 2) throw InvalidArgument("superellipsoid: bad parameters");
    const detail::RingTable ring(segments);
    Mesh m;
    for (int j = 0; j <= rings; ++j) {
        // latitude from -pi/2 (south pole) to pi/2; poles pinned so they weld exactly
        double phi = -0.5 * 3.14159265358979323846 + 3.14159265358979323846 * j / rings;
        float cp = (j == 0 || j == rings) ? 0.0f : static_cast<float>(std::cos(phi));
        float sp = j == 0 ? -1.0f : (j == rings ? 1.0f : static_cast<float>(std::sin(phi)));
        float xc = signed_pow(cp, e1), y = signed_pow(sp, e1);
        for (int i = 0; i <= segments; ++i) {
            float ct = ring.c[static_cast<std::size_t>(i)], st = ring.s[static_cast<std::size_t>(i)];
            m.vertices.push_back({xc * signed_pow(ct, e2), y, xc * signed_pow(st, e2)});
            m.uv.push_back({static_cast<float>(i) / segments, 1.0f - static_cast<float>(j) / rings});
        }
    }
    grid_triangles(m, rings, segments);
    compute_smooth_normals(m);
    m.watertight = is_watertight(m);
    return m;
}

Mesh make_sphere(int segments, int rings) { return make_superellipsoid(1.0f, 1.0f, segments, rings); }

Mesh make_box(Vec3 h) {
    if (h.x <= 0 || h.y <= 0 || h.z <= 0) throw InvalidArgument("box: half extents must be positive");
    Mesh m;
    // each face: normal axis, then two tangent axes with cross(t1, t2) == normal
    const Vec3 normals[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    for (const Vec3& n : normals) {
        Vec3 t1 = std::fabs(n.y) > 0 ? Vec3{0, 0, 1} : Vec3{0, 1, 0};
        Vec3 t2 = cross(n, t1);
        t1 = cross(t2, n);
        auto base = static_cast<std::uint32_t>(m.vertices.size());
        const float su[4] = {-1, 1, 1, -1}, sv[4] = {-1, -1, 1, 1};
        for (int k = 0; k < 4; ++k) {
            Vec3 p = n + t1 * su[k] + t2 * sv[k];
            m.vertices.push_back(p * h);
            m.normals.push_back(n);
            m.uv.push_back({0.5f * (su[k] + 1), 0.5f * (sv[k] + 1)});
        }
        m.triangles.push_back({base, base + 1, base + 2});
        m.triangles.push_back({base, base + 2, base + 3});
    }
    m.watertight = is_watertight(m);
    return m;
}

Mesh make_torus(float major_radius, float minor_radius, int segments, int rings) {
    if (minor_radius <= 0 || major_radius <= minor_radius || segments < 3 || rings < 3)
        throw InvalidArgument("torus: bad parameters");
    const detail::RingTable around(segments), tube(rings);
    Mesh m;
    for (int j = 0; j <= rings; ++j) {
        float cv = tube.c[static_cast<std::size_t>(j)], sv = tube.s[static_cast<std::size_t>(j)];
        for (int i = 0; i <= segments; ++i) {
            float cu = around.c[static_cast<std::size_t>(i)], su = around.s[static_cast<std::size_t>(i)];
            float r = major_radius + minor_radius * cv;
            m.vertices.push_back({r * cu, minor_radius * sv, r * su});
            m.normals.push_back(normalize(Vec3{cv * cu, sv, cv * su}));
            m.uv.push_back({static_cast<float>(i) / segments, static_cast<float>(j) / rings});
        }
    }
    grid_triangles(m, rings, segments);
    m.watertight = is_watertight(m);
    return m;
}

Mesh make_revolved_solid(const std::function<float(float)>& radius, float height, int rows, int segments) {
    if (height <= 0 || rows < 1 || segments < 3) throw InvalidArgument("revolved solid: bad parameters");
    const detail::RingTable ring(segments);
    auto r_at = [&](float y) { return radius(y / height); };
    Mesh m = detail::revolve_side(r_at, 0.0f, height, rows, ring, true);
    m.append(detail::revolve_cap(r_at(0.0f), 0.0f, ring, false));
    m.append(detail::revolve_cap(r_at(height), height, ring, true));
    m.watertight = is_watertight(m);
    return m;
}

PrimitiveObject generate_primitive_object(std::uint64_t seed) {
    Rng rng(seed);
    PrimitiveObject obj;
    obj.kind = static_cast<PrimitiveKind>(rng.below(5));
    obj.scale = {static_cast<float>(rng.uniform(0.5, 2.0)), static_cast<float>(rng.uniform(0.5, 2.0)),
                 static_cast<float>(rng.uniform(0.5, 2.0))};
    Mesh base;
    switch (obj.kind) {
        case PrimitiveKind::Sphere: base = make_sphere(); break;
        case PrimitiveKind::Box: base = make_box({1, 1, 1}); break;
        case PrimitiveKind::Torus: base = make_torus(1.0f, static_cast<float>(rng.uniform(0.2, 0.5))); break;
        case PrimitiveKind::Superellipsoid:
            obj.exponent1 = static_cast<float>(rng.uniform(0.3, 2.0));
            obj.exponent2 = static_cast<float>(rng.uniform(0.3, 2.0));
            base = make_superellipsoid(obj.exponent1, obj.exponent2);
            break;
        case PrimitiveKind::RevolvedProfile: {
            // smooth random profile: base radius plus two sine terms, never below 0.2
            float r0 = static_cast<float>(rng.uniform(0.4, 1.0));
            float a1 = static_cast<float>(rng.uniform(-0.3, 0.3)), a2 = static_cast<float>(rng.uniform(-0.2, 0.2));
            float f1 = static_cast<float>(rng.uniform(1.0, 6.0)), f2 = static_cast<float>(rng.uniform(1.0, 12.0));
            float p1 = static_cast<float>(rng.uniform(0.0, kTwoPi)), p2 = static_cast<float>(rng.uniform(0.0, kTwoPi));
            auto radius = [=](float v) {
                return std::max(0.2f, r0 + a1 * std::sin(f1 * v + p1) + a2 * std::sin(f2 * v + p2));
            };
            base = make_revolved_solid(radius, 2.0f);
            base = transformed(base, Affine::translation({0, -1, 0}));
            break;
        }
    }
    obj.mesh = transformed(base, Affine::scaling(obj.scale));
    obj.mesh.watertight = base.watertight;
    return obj;
}

}  // namespace matforge::procgen
