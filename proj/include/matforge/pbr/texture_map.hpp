// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "matforge/core/image.hpp"
#include "matforge/core/vec.hpp"

namespace matforge::pbr {

/// A 1- or 3-channel map of samples in [0,1], stored linear. Normal maps hold encoded
/// triples (n + 1) / 2 of unit vectors.
class TextureMap {
public:
    TextureMap() = default;

    /// Validates channels (1 or 3), size (>= 1) and that every sample is finite and in [0,1].
    static TextureMap from_image(FloatImage image);
    static TextureMap constant(int width, int height, float value);
    static TextureMap constant(int width, int height, Vec3 value);
    /// Re-encodes every texel of an encoded normal map so the decoded vector is unit length.
    static TextureMap normal_map(FloatImage encoded);
    static TextureMap flat_normal(int width, int height);

    int width() const { return image_.width; }
    int height() const { return image_.height; }
    int channels() const { return image_.channels; }
    const FloatImage& image() const { return image_; }
    std::span<const float> samples() const { return image_.data; }

    /// Bilinear lookup with repeat wrapping; uv (0,0) is the top-left texel corner.
    float sample1(Vec2 uv) const;
    Vec3 sample3(Vec2 uv) const;

    friend bool operator==(const TextureMap&, const TextureMap&) = default;

private:
    explicit TextureMap(FloatImage image) : image_(std::move(image)) {}
    FloatImage image_;
};

/// Bilinear resampling of a map (pixel-centre aligned, clamp-to-edge). Output stays in [0,1].
TextureMap resample_map(const TextureMap& map, int width, int height);

Vec3 decode_normal(Vec3 encoded);
Vec3 encode_normal(Vec3 unit);

}  // namespace matforge::pbr
