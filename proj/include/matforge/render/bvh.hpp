// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "matforge/core/vec.hpp"

namespace matforge::render {

struct Ray {
    Vec3 origin;
    Vec3 dir;  // need not be unit length; t is in units of |dir|
    float tmax = 1e30f;
};

struct Hit {
    float t = 1e30f;
    std::uint32_t prim = 0;
    float b1 = 0, b2 = 0;  // barycentrics of vertices 1 and 2
};

/// Möller-Trumbore ray/triangle test. Returns the hit distance or a negative value on a miss.
float intersect_triangle(const Ray& ray, Vec3 p0, Vec3 p1, Vec3 p2, float& b1, float& b2);

/// Binned-SAH bounding volume hierarchy over a triangle soup.
class Bvh {
public:
    Bvh() = default;
    /// `p0[i], p1[i], p2[i]` are the corners of triangle i.
    Bvh(std::vector<Vec3> p0, std::vector<Vec3> p1, std::vector<Vec3> p2);

    /// Closest hit with t in (0, ray.tmax).
    bool intersect(const Ray& ray, Hit& hit) const;
    bool occluded(const Ray& ray) const;

    std::size_t triangle_count() const { return p0_.size(); }
    std::size_t node_count() const { return nodes_.size(); }

private:
    struct Node {
        Vec3 lo, hi;
        std::uint32_t first = 0;  // leaf: first index into order_; inner: right child
        std::uint32_t count = 0;  // 0 for inner nodes; left child is the next node
    };
    std::uint32_t build(std::uint32_t begin, std::uint32_t end, std::vector<Vec3>& centroids, int depth);
    template <bool AnyHit>
    bool traverse(const Ray& ray, Hit& hit) const;

    std::vector<Vec3> p0_, p1_, p2_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
};

}  // namespace matforge::render
