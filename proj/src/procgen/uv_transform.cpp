// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/procgen/uv_transform.hpp"

#include <cmath>

#include "matforge/core/rng.hpp"

namespace matforge::procgen {

namespace {
float wrap01(float v) {
    float w = v - std::floor(v);
    return w >= 1.0f ? 0.0f : w;
}
}  // namespace

Vec2 UvTransform::apply(Vec2 uv) const {
    float c = std::cos(rotation), s = std::sin(rotation);
    float x = scale * (c * uv.x - s * uv.y) + offset.x;
    float y = scale * (s * uv.x + c * uv.y) + offset.y;
    return {wrap01(x), wrap01(y)};
}

UvTransform randomize_uv(std::uint64_t seed) {
    Rng rng(seed);
    UvTransform t;
    t.offset = {rng.uniform(), rng.uniform()};
    t.rotation = rng.uniform() * kTwoPi;
    t.scale = static_cast<float>(rng.uniform(0.5, 2.0));
    return t;
}

}  // namespace matforge::procgen
