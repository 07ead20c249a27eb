// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "matforge/core/vec.hpp"

namespace matforge {

/// Interleaved float image with 1, 3 or 4 channels. Row-major, top row first.
struct FloatImage {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<float> data;

    FloatImage() = default;
    FloatImage(int w, int h, int c, float fill = 0.0f)
        : width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c, fill) {}

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    std::size_t index(int x, int y) const {
        return (static_cast<std::size_t>(y) * width + x) * channels;
    }
    float& at(int x, int y, int c) { return data[index(x, y) + c]; }
    float at(int x, int y, int c) const { return data[index(x, y) + c]; }

    Vec3 rgb(int x, int y) const {
        std::size_t i = index(x, y);
        return {data[i], data[i + 1], data[i + 2]};
    }
    void set_rgb(int x, int y, Vec3 v) {
        std::size_t i = index(x, y);
        data[i] = v.x;
        data[i + 1] = v.y;
        data[i + 2] = v.z;
    }
    bool empty() const { return data.empty(); }
    friend bool operator==(const FloatImage&, const FloatImage&) = default;
};

/// 8-bit interleaved image (sRGB-encoded when it holds colour).
struct Image8 {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> data;

    Image8() = default;
    Image8(int w, int h, int c) : width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c, 0) {}
    friend bool operator==(const Image8&, const Image8&) = default;
};

/// Binary mask, one byte per pixel: 0 or 1.
struct Mask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    Mask() = default;
    Mask(int w, int h, std::uint8_t fill = 0) : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t count() const;
    bool any() const { return count() > 0; }
    friend bool operator==(const Mask&, const Mask&) = default;
};

struct PixelRect {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open
    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

/// Tight bounding box of nonzero mask pixels. Empty rect when the mask is empty.
PixelRect bounding_box(const Mask& mask);

/// Bilinear resampling with pixel-centre alignment and clamp-to-edge borders.
/// Same-size requests return an exact copy.
FloatImage resample_bilinear(const FloatImage& src, int width, int height);

/// Nearest-neighbour mask resampling (pixel-centre alignment).
Mask resample_nearest(const Mask& src, int width, int height);

FloatImage crop(const FloatImage& src, PixelRect r);
Mask crop(const Mask& src, PixelRect r);

/// 8-bit values scaled to [0,1] without any transfer-function decode.
FloatImage to_unit_float(const Image8& img);
Image8 from_unit_float(const FloatImage& img);

}  // namespace matforge
