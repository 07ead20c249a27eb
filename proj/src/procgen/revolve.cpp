// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "revolve.hpp"

#include <cmath>

namespace matforge::procgen::detail {

RingTable::RingTable(int segments) : c(static_cast<std::size_t>(segments) + 1), s(c.size()) {
    for (int i = 0; i < segments; ++i) {
        double a = 2.0 * 3.14159265358979323846 * i / segments;
        c[static_cast<std::size_t>(i)] = static_cast<float>(std::cos(a));
        s[static_cast<std::size_t>(i)] = static_cast<float>(std::sin(a));
    }
    c.back() = c.front();
    s.back() = s.front();
}

Mesh revolve_side(const std::function<float(float)>& radius_at_y, float y0, float y1, int rows, const RingTable& ring,
                  bool outward) {
    const int seg = ring.segments();
    Mesh m;
    const float dy = (y1 - y0) / rows;
    for (int j = 0; j <= rows; ++j) {
        float y = (j == rows) ? y1 : y0 + (y1 - y0) * static_cast<float>(j) / static_cast<float>(rows);
        float r = radius_at_y(y);
        // slope dr/dy by central difference inside [y0, y1]
        float ya = std::max(y0, y - 0.5f * dy), yb = std::min(y1, y + 0.5f * dy);
        float slope = (radius_at_y(yb) - radius_at_y(ya)) / (yb - ya);
        for (int i = 0; i <= seg; ++i) {
            m.vertices.push_back(ring.point(r, y, i));
            Vec3 n = normalize(Vec3{ring.c[static_cast<std::size_t>(i)], -slope, ring.s[static_cast<std::size_t>(i)]});
            m.normals.push_back(outward ? n : -n);
            m.uv.push_back({static_cast<float>(i) / seg, 1.0f - static_cast<float>(j) / rows});
        }
    }
    auto idx = [&](int j, int i) { return static_cast<std::uint32_t>(j * (seg + 1) + i); };
    for (int j = 0; j < rows; ++j) {
        for (int i = 0; i < seg; ++i) {
            std::uint32_t a = idx(j, i), b = idx(j + 1, i), c = idx(j + 1, i + 1), d = idx(j, i + 1);
            if (outward) {
                m.triangles.push_back({a, b, c});
                m.triangles.push_back({a, c, d});
            } else {
                m.triangles.push_back({a, c, b});
                m.triangles.push_back({a, d, c});
            }
        }
    }
    return m;
}

Mesh revolve_cap(float radius, float y, const RingTable& ring, bool up) {
    const int seg = ring.segments();
    Mesh m;
    const Vec3 n{0, up ? 1.0f : -1.0f, 0};
    m.vertices.push_back({0, y, 0});
    m.normals.push_back(n);
    m.uv.push_back({0.5f, 0.5f});
    for (int i = 0; i <= seg; ++i) {
        m.vertices.push_back(ring.point(radius, y, i));
        m.normals.push_back(n);
        m.uv.push_back({0.5f + 0.5f * ring.c[static_cast<std::size_t>(i)], 0.5f + 0.5f * ring.s[static_cast<std::size_t>(i)]});
    }
    for (int i = 0; i < seg; ++i) {
        auto p = static_cast<std::uint32_t>(i + 1), q = static_cast<std::uint32_t>(i + 2);
        if (up)
            m.triangles.push_back({0, q, p});
        else
            m.triangles.push_back({0, p, q});
    }
    return m;
}

Mesh revolve_annulus(float r_outer, float r_inner, float y, const RingTable& ring) {
    const int seg = ring.segments();
    Mesh m;
    for (int i = 0; i <= seg; ++i) {
        float u = static_cast<float>(i) / seg;
        m.vertices.push_back(ring.point(r_outer, y, i));
        m.vertices.push_back(ring.point(r_inner, y, i));
        m.normals.push_back({0, 1, 0});
        m.normals.push_back({0, 1, 0});
        m.uv.push_back({u, 0.0f});
        m.uv.push_back({u, 1.0f});
    }
    for (int i = 0; i < seg; ++i) {
        auto o0 = static_cast<std::uint32_t>(2 * i), i0 = o0 + 1, o1 = o0 + 2, i1 = o0 + 3;
        m.triangles.push_back({o0, i0, i1});
        m.triangles.push_back({o0, i1, o1});
    }
    return m;
}

}  // namespace matforge::procgen::detail
