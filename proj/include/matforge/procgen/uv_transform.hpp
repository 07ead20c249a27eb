// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "matforge/core/vec.hpp"

namespace matforge::procgen {

/// uv' = scale * Rot(rotation) * uv + offset, wrapped into [0,1).
struct UvTransform {
    Vec2 offset{0, 0};
    float rotation = 0;
    float scale = 1;

    Vec2 apply(Vec2 uv) const;
    static UvTransform identity() { return {}; }
    friend bool operator==(const UvTransform& a, const UvTransform& b) {
        return a.offset.x == b.offset.x && a.offset.y == b.offset.y && a.rotation == b.rotation && a.scale == b.scale;
    }
};

/// offset in [0,1)^2, rotation in [0, 2 pi), scale in [0.5, 2].
UvTransform randomize_uv(std::uint64_t seed);

}  // namespace matforge::procgen
