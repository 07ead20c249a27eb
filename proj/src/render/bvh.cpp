// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/render/bvh.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "matforge/core/error.hpp"

namespace matforge::render {

float intersect_triangle(const Ray& ray, Vec3 p0, Vec3 p1, Vec3 p2, float& b1, float& b2) {
    Vec3 e1 = p1 - p0, e2 = p2 - p0;
    Vec3 pv = cross(ray.dir, e2);
    float det = dot(e1, pv);
    if (det == 0.0f || !std::isfinite(det)) return -1.0f;
    float inv = 1.0f / det;
    Vec3 tv = ray.origin - p0;
    float u = dot(tv, pv) * inv;
    if (u < 0.0f || u > 1.0f) return -1.0f;
    Vec3 qv = cross(tv, e1);
    float v = dot(ray.dir, qv) * inv;
    if (v < 0.0f || u + v > 1.0f) return -1.0f;
    b1 = u;
    b2 = v;
    return dot(e2, qv) * inv;
}

namespace {

constexpr int kBins = 12;
constexpr std::uint32_t kLeafSize = 4;
// keeps the fixed traversal stack safe
constexpr int kMaxDepth = 48;

float area(Vec3 lo, Vec3 hi) {
    Vec3 e = hi - lo;
    if (e.x < 0) return 0;
    return 2.0f * (e.x * e.y + e.y * e.z + e.z * e.x);
}

bool slab(const Ray& ray, Vec3 inv, Vec3 lo, Vec3 hi, float tmax, float& tnear) {
    float t0 = 0.0f, t1 = tmax;
    for (int a = 0; a < 3; ++a) {
        float ta = (lo[a] - ray.origin[a]) * inv[a];
        float tb = (hi[a] - ray.origin[a]) * inv[a];
        if (ta > tb) std::swap(ta, tb);
        // NaN from 0 * inf leaves the bound unchanged
        t0 = ta > t0 ? ta : t0;
        t1 = tb < t1 ? tb : t1;
        if (t0 > t1) return false;
    }
    tnear = t0;
    return true;
}

}  // namespace

Bvh::Bvh(std::vector<Vec3> p0, std::vector<Vec3> p1, std::vector<Vec3> p2)
    : p0_(std::move(p0)), p1_(std::move(p1)), p2_(std::move(p2)) {
    if (p0_.size() != p1_.size() || p0_.size() != p2_.size()) throw InvalidArgument("bvh: corner arrays differ");
    const auto n = static_cast<std::uint32_t>(p0_.size());
    order_.resize(n);
    std::vector<Vec3> centroids(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        order_[i] = i;
        centroids[i] = (p0_[i] + p1_[i] + p2_[i]) * (1.0f / 3.0f);
    }
    nodes_.reserve(2 * static_cast<std::size_t>(n) + 1);
    if (n > 0) build(0, n, centroids, 0);
}

std::uint32_t Bvh::build(std::uint32_t begin, std::uint32_t end, std::vector<Vec3>& centroids, int depth) {
    const auto index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({});
    Vec3 lo{1e30f, 1e30f, 1e30f}, hi{-1e30f, -1e30f, -1e30f};
    Vec3 clo = lo, chi = hi;
    for (std::uint32_t i = begin; i < end; ++i) {
        std::uint32_t t = order_[i];
        lo = min(lo, min(p0_[t], min(p1_[t], p2_[t])));
        hi = max(hi, max(p0_[t], max(p1_[t], p2_[t])));
        clo = min(clo, centroids[t]);
        chi = max(chi, centroids[t]);
    }
    nodes_[index].lo = lo;
    nodes_[index].hi = hi;
    const std::uint32_t count = end - begin;
    auto make_leaf = [&] {
        nodes_[index].first = begin;
        nodes_[index].count = count;
        return index;
    };
    if (count <= kLeafSize || depth >= kMaxDepth) return make_leaf();

    // best SAH split over binned centroids on every axis
    float best_cost = 1e30f;
    int best_axis = -1, best_bin = 0;
    for (int axis = 0; axis < 3; ++axis) {
        float extent = chi[axis] - clo[axis];
        if (extent <= 0) continue;
        struct Bin {
            Vec3 lo{1e30f, 1e30f, 1e30f}, hi{-1e30f, -1e30f, -1e30f};
            std::uint32_t n = 0;
        };
        std::array<Bin, kBins> bins;
        for (std::uint32_t i = begin; i < end; ++i) {
            std::uint32_t t = order_[i];
            int b = std::min(kBins - 1, static_cast<int>(kBins * (centroids[t][axis] - clo[axis]) / extent));
            bins[b].n++;
            bins[b].lo = min(bins[b].lo, min(p0_[t], min(p1_[t], p2_[t])));
            bins[b].hi = max(bins[b].hi, max(p0_[t], max(p1_[t], p2_[t])));
        }
        std::array<float, kBins - 1> left_area{}, right_area{};
        std::array<std::uint32_t, kBins - 1> left_n{}, right_n{};
        Vec3 l0{1e30f, 1e30f, 1e30f}, l1{-1e30f, -1e30f, -1e30f};
        std::uint32_t ln = 0;
        for (int b = 0; b < kBins - 1; ++b) {
            l0 = min(l0, bins[b].lo);
            l1 = max(l1, bins[b].hi);
            ln += bins[b].n;
            left_area[b] = area(l0, l1);
            left_n[b] = ln;
        }
        Vec3 r0{1e30f, 1e30f, 1e30f}, r1{-1e30f, -1e30f, -1e30f};
        std::uint32_t rn = 0;
        for (int b = kBins - 1; b > 0; --b) {
            r0 = min(r0, bins[b].lo);
            r1 = max(r1, bins[b].hi);
            rn += bins[b].n;
            right_area[b - 1] = area(r0, r1);
            right_n[b - 1] = rn;
        }
        for (int b = 0; b < kBins - 1; ++b) {
            if (left_n[b] == 0 || right_n[b] == 0) continue;
            float cost = left_area[b] * left_n[b] + right_area[b] * right_n[b];
            if (cost < best_cost) {
                best_cost = cost;
                best_axis = axis;
                best_bin = b;
            }
        }
    }
    if (best_axis < 0 || best_cost >= area(lo, hi) * count) return make_leaf();

    float extent = chi[best_axis] - clo[best_axis];
    auto mid_it = std::partition(order_.begin() + begin, order_.begin() + end, [&](std::uint32_t t) {
        int b = std::min(kBins - 1, static_cast<int>(kBins * (centroids[t][best_axis] - clo[best_axis]) / extent));
        return b <= best_bin;
    });
    auto mid = static_cast<std::uint32_t>(mid_it - order_.begin());
    if (mid == begin || mid == end) return make_leaf();
    build(begin, mid, centroids, depth + 1);
    std::uint32_t right = build(mid, end, centroids, depth + 1);
    nodes_[index].first = right;
    nodes_[index].count = 0;
    return index;
}

template <bool AnyHit>
bool Bvh::traverse(const Ray& ray, Hit& hit) const {
    if (nodes_.empty()) return false;
    const Vec3 inv{1.0f / ray.dir.x, 1.0f / ray.dir.y, 1.0f / ray.dir.z};
    float tmax = ray.tmax;
    bool found = false;
    std::uint32_t stack[64];
    int sp = 0;
    stack[sp++] = 0;
    while (sp > 0) {
        const Node& node = nodes_[stack[--sp]];
        float tnear;
        if (!slab(ray, inv, node.lo, node.hi, tmax, tnear)) continue;
        if (node.count > 0) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                std::uint32_t t = order_[i];
                float b1, b2;
                float d = intersect_triangle(ray, p0_[t], p1_[t], p2_[t], b1, b2);
                if (d > 0.0f && d < tmax) {
                    if constexpr (AnyHit) return true;
                    tmax = d;
                    hit = {d, t, b1, b2};
                    found = true;
                }
            }
        } else {
            auto self = static_cast<std::uint32_t>(&node - nodes_.data());
            std::uint32_t left = self + 1, right = node.first;
            // visit the nearer child first
            float tl = 0, tr = 0;
            bool hl = slab(ray, inv, nodes_[left].lo, nodes_[left].hi, tmax, tl);
            bool hr = slab(ray, inv, nodes_[right].lo, nodes_[right].hi, tmax, tr);
            if (hl && hr) {
                if (tl <= tr) {
                    stack[sp++] = right;
                    stack[sp++] = left;
                } else {
                    stack[sp++] = left;
                    stack[sp++] = right;
                }
            } else if (hl) {
                stack[sp++] = left;
            } else if (hr) {
                stack[sp++] = right;
            }
        }
    }
    return found;
}

bool Bvh::intersect(const Ray& ray, Hit& hit) const { return traverse<false>(ray, hit); }

bool Bvh::occluded(const Ray& ray) const {
    Hit unused;
    return traverse<true>(ray, unused);
}

}  // namespace matforge::render
