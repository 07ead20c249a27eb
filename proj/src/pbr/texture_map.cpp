// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/pbr/texture_map.hpp"

#include <algorithm>
#include <cmath>

#include "matforge/core/error.hpp"

namespace matforge::pbr {

TextureMap TextureMap::from_image(FloatImage image) {
    if (image.channels != 1 && image.channels != 3)
        throw InvalidArgument("texture map must have 1 or 3 channels");
    if (image.width < 1 || image.height < 1) throw InvalidArgument("texture map must be at least 1x1");
    for (float v : image.data)
        if (!std::isfinite(v) || v < 0.0f || v > 1.0f) throw InvalidArgument("texture sample outside [0,1]");
    return TextureMap(std::move(image));
}

TextureMap TextureMap::constant(int width, int height, float value) {
    return from_image(FloatImage(width, height, 1, value));
}

TextureMap TextureMap::constant(int width, int height, Vec3 value) {
    FloatImage img(width, height, 3);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        img.data[3 * i] = value.x;
        img.data[3 * i + 1] = value.y;
        img.data[3 * i + 2] = value.z;
    }
    return from_image(std::move(img));
}

TextureMap TextureMap::normal_map(FloatImage encoded) {
    if (encoded.channels != 3) throw InvalidArgument("normal map must have 3 channels");
    for (std::size_t i = 0; i < encoded.pixel_count(); ++i) {
        float* p = &encoded.data[3 * i];
        Vec3 n = encode_normal(decode_normal({p[0], p[1], p[2]}));
        p[0] = n.x;
        p[1] = n.y;
        p[2] = n.z;
    }
    return from_image(std::move(encoded));
}

TextureMap TextureMap::flat_normal(int width, int height) { return constant(width, height, Vec3{0.5f, 0.5f, 1.0f}); }

namespace {

struct Bilinear {
    int x0, x1, y0, y1;
    float fx, fy;
};

Bilinear wrap_taps(Vec2 uv, int w, int h) {
    float u = uv.x - std::floor(uv.x);
    float v = uv.y - std::floor(uv.y);
    float sx = u * w - 0.5f;
    float sy = v * h - 0.5f;
    float fx0 = std::floor(sx), fy0 = std::floor(sy);
    auto wrap = [](int i, int n) { return ((i % n) + n) % n; };
    int ix = static_cast<int>(fx0), iy = static_cast<int>(fy0);
    return {wrap(ix, w), wrap(ix + 1, w), wrap(iy, h), wrap(iy + 1, h), sx - fx0, sy - fy0};
}

}  // namespace

float TextureMap::sample1(Vec2 uv) const {
    Bilinear t = wrap_taps(uv, image_.width, image_.height);
    const int c = 0;
    float top = (1 - t.fx) * image_.at(t.x0, t.y0, c) + t.fx * image_.at(t.x1, t.y0, c);
    float bot = (1 - t.fx) * image_.at(t.x0, t.y1, c) + t.fx * image_.at(t.x1, t.y1, c);
    return (1 - t.fy) * top + t.fy * bot;
}

Vec3 TextureMap::sample3(Vec2 uv) const {
    if (image_.channels == 1) {
        float v = sample1(uv);
        return {v, v, v};
    }
    Bilinear t = wrap_taps(uv, image_.width, image_.height);
    Vec3 top = image_.rgb(t.x0, t.y0) * (1 - t.fx) + image_.rgb(t.x1, t.y0) * t.fx;
    Vec3 bot = image_.rgb(t.x0, t.y1) * (1 - t.fx) + image_.rgb(t.x1, t.y1) * t.fx;
    return top * (1 - t.fy) + bot * t.fy;
}

TextureMap resample_map(const TextureMap& map, int width, int height) {
    if (width < 1 || height < 1) throw InvalidArgument("resample_map: target dimensions must be >= 1");
    FloatImage out = resample_bilinear(map.image(), width, height);
    // convex weights keep samples in range; clamp absorbs float rounding
    for (float& v : out.data) v = std::clamp(v, 0.0f, 1.0f);
    return TextureMap::from_image(std::move(out));
}

Vec3 decode_normal(Vec3 encoded) {
    Vec3 n = normalize(encoded * 2.0f - Vec3{1, 1, 1});
    return length(n) > 0 ? n : Vec3{0, 0, 1};
}

Vec3 encode_normal(Vec3 unit) {
    Vec3 e = (unit + Vec3{1, 1, 1}) * 0.5f;
    return {std::clamp(e.x, 0.0f, 1.0f), std::clamp(e.y, 0.0f, 1.0f), std::clamp(e.z, 0.0f, 1.0f)};
}

}  // namespace matforge::pbr
