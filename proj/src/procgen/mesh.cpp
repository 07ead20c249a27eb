// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/procgen/mesh.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_map>

#include <fmt/format.h>

#include "matforge/core/error.hpp"

namespace matforge::procgen {

void Mesh::validate() const {
    const auto n = static_cast<std::uint32_t>(vertices.size());
    if (uv.size() != vertices.size() || normals.size() != vertices.size())
        throw InvalidArgument("mesh attribute arrays differ in length");
    for (const auto& t : triangles)
        for (auto i : t)
            if (i >= n) throw InvalidArgument(fmt::format("mesh triangle index {} out of range ({})", i, n));
    for (const auto& p : vertices)
        if (!is_finite(p)) throw InvalidArgument("mesh vertex is not finite");
    for (const auto& t : uv)
        if (!(t.x >= 0 && t.x <= 1 && t.y >= 0 && t.y <= 1)) throw InvalidArgument("mesh uv outside [0,1]^2");
    for (const auto& nrm : normals)
        if (!(std::abs(length(nrm) - 1.0f) <= 1e-4f)) throw InvalidArgument("mesh normal is not unit length");
}

Bounds Mesh::bounds() const {
    Bounds b;
    for (const auto& p : vertices) b.extend(p);
    return b;
}

BoundingSphere Mesh::bounding_sphere() const {
    Bounds b = bounds();
    BoundingSphere s{b.center(), 0.0f};
    for (const auto& p : vertices) s.radius = std::max(s.radius, length(p - s.center));
    return s;
}

void Mesh::append(const Mesh& other) {
    const auto base = static_cast<std::uint32_t>(vertices.size());
    vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
    uv.insert(uv.end(), other.uv.begin(), other.uv.end());
    normals.insert(normals.end(), other.normals.begin(), other.normals.end());
    for (auto t : other.triangles) triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
    watertight = watertight && other.watertight;
}

Mesh transformed(const Mesh& mesh, const Affine& xf) {
    Mesh out = mesh;
    for (auto& p : out.vertices) p = xf.point(p);
    for (auto& n : out.normals) n = xf.normal(n);
    return out;
}

namespace {

struct PositionKey {
    std::uint32_t x, y, z;
    bool operator==(const PositionKey&) const = default;
};
struct PositionHash {
    std::size_t operator()(const PositionKey& k) const {
        return (static_cast<std::size_t>(k.x) * 73856093u) ^ (static_cast<std::size_t>(k.y) * 19349663u) ^
               (static_cast<std::size_t>(k.z) * 83492791u);
    }
};

PositionKey key_of(Vec3 p) {
    // +0.0f folds -0 onto 0 so mirrored seams weld
    return {std::bit_cast<std::uint32_t>(p.x + 0.0f), std::bit_cast<std::uint32_t>(p.y + 0.0f),
            std::bit_cast<std::uint32_t>(p.z + 0.0f)};
}

/// Maps each vertex to the index of the first vertex at the same position.
std::vector<std::uint32_t> weld(const Mesh& mesh) {
    std::unordered_map<PositionKey, std::uint32_t, PositionHash> first;
    std::vector<std::uint32_t> out(mesh.vertices.size());
    for (std::uint32_t i = 0; i < mesh.vertices.size(); ++i) {
        auto [it, inserted] = first.try_emplace(key_of(mesh.vertices[i]), i);
        out[i] = it->second;
    }
    return out;
}

}  // namespace

bool is_watertight(const Mesh& mesh) {
    if (mesh.triangles.empty()) return false;
    auto canon = weld(mesh);
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> edges;
    for (const auto& t : mesh.triangles) {
        std::uint32_t v[3] = {canon[t[0]], canon[t[1]], canon[t[2]]};
        if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2]) return false;  // degenerate after welding
        for (int e = 0; e < 3; ++e) {
            std::uint32_t a = v[e], b = v[(e + 1) % 3];
            ++edges[{std::min(a, b), std::max(a, b)}];
        }
    }
    for (const auto& [edge, count] : edges)
        if (count != 2) return false;
    return true;
}

double orientation_agreement(const Mesh& mesh) {
    if (mesh.triangles.empty()) return 1.0;
    std::size_t agree = 0;
    for (const auto& t : mesh.triangles) {
        Vec3 ng = cross(mesh.vertices[t[1]] - mesh.vertices[t[0]], mesh.vertices[t[2]] - mesh.vertices[t[0]]);
        Vec3 ns = mesh.normals[t[0]] + mesh.normals[t[1]] + mesh.normals[t[2]];
        if (dot(ng, ns) > 0) ++agree;
    }
    return static_cast<double>(agree) / static_cast<double>(mesh.triangles.size());
}

void compute_smooth_normals(Mesh& mesh) {
    auto canon = weld(mesh);
    std::vector<Vec3> acc(mesh.vertices.size(), Vec3{0, 0, 0});
    for (const auto& t : mesh.triangles) {
        Vec3 n = cross(mesh.vertices[t[1]] - mesh.vertices[t[0]], mesh.vertices[t[2]] - mesh.vertices[t[0]]);
        for (auto i : t) acc[canon[i]] += n;
    }
    mesh.normals.resize(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        Vec3 n = normalize(acc[canon[i]]);
        mesh.normals[i] = length(n) > 0 ? n : Vec3{0, 1, 0};
    }
}

void write_obj(const std::filesystem::path& path, const Mesh& mesh) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string());
    for (const auto& p : mesh.vertices) out << fmt::format("v {:.7g} {:.7g} {:.7g}\n", p.x, p.y, p.z);
    for (const auto& t : mesh.uv) out << fmt::format("vt {:.7g} {:.7g}\n", t.x, 1.0f - t.y);
    for (const auto& n : mesh.normals) out << fmt::format("vn {:.7g} {:.7g} {:.7g}\n", n.x, n.y, n.z);
    for (const auto& t : mesh.triangles) {
        out << fmt::format("f {0}/{0}/{0} {1}/{1}/{1} {2}/{2}/{2}\n", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace matforge::procgen
