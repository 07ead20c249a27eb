// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/core/image.hpp"

#include <algorithm>
#include <cmath>

#include "matforge/core/error.hpp"

namespace matforge {

std::size_t Mask::count() const {
    return static_cast<std::size_t>(std::count_if(data.begin(), data.end(), [](std::uint8_t v) { return v != 0; }));
}

PixelRect bounding_box(const Mask& mask) {
    PixelRect r{mask.width, mask.height, 0, 0};
    bool any = false;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            any = true;
            r.x0 = std::min(r.x0, x);
            r.y0 = std::min(r.y0, y);
            r.x1 = std::max(r.x1, x + 1);
            r.y1 = std::max(r.y1, y + 1);
        }
    }
    return any ? r : PixelRect{};
}

namespace {

struct Tap {
    int i0, i1;
    float w1;  // weight of i1
};

// Source coordinate of destination pixel centre i: (i + 0.5) * src/dst - 0.5.
std::vector<Tap> make_taps(int src, int dst) {
    std::vector<Tap> taps(static_cast<std::size_t>(dst));
    const double scale = static_cast<double>(src) / dst;
    for (int i = 0; i < dst; ++i) {
        double s = (i + 0.5) * scale - 0.5;
        s = std::clamp(s, 0.0, static_cast<double>(src - 1));
        int i0 = static_cast<int>(std::floor(s));
        int i1 = std::min(i0 + 1, src - 1);
        taps[static_cast<std::size_t>(i)] = {i0, i1, static_cast<float>(s - i0)};
    }
    return taps;
}

}  // namespace

FloatImage resample_bilinear(const FloatImage& src, int width, int height) {
    if (width < 1 || height < 1) throw InvalidArgument("resample: target dimensions must be >= 1");
    if (src.width < 1 || src.height < 1) throw InvalidArgument("resample: empty source image");
    if (width == src.width && height == src.height) return src;

    auto tx = make_taps(src.width, width);
    auto ty = make_taps(src.height, height);
    FloatImage out(width, height, src.channels);
    for (int y = 0; y < height; ++y) {
        const Tap& vy = ty[static_cast<std::size_t>(y)];
        for (int x = 0; x < width; ++x) {
            const Tap& vx = tx[static_cast<std::size_t>(x)];
            for (int c = 0; c < src.channels; ++c) {
                float top = (1 - vx.w1) * src.at(vx.i0, vy.i0, c) + vx.w1 * src.at(vx.i1, vy.i0, c);
                float bot = (1 - vx.w1) * src.at(vx.i0, vy.i1, c) + vx.w1 * src.at(vx.i1, vy.i1, c);
                out.at(x, y, c) = (1 - vy.w1) * top + vy.w1 * bot;
            }
        }
    }
    return out;
}

Mask resample_nearest(const Mask& src, int width, int height) {
    if (width < 1 || height < 1) throw InvalidArgument("resample: target dimensions must be >= 1");
    if (width == src.width && height == src.height) return src;
    Mask out(width, height);
    for (int y = 0; y < height; ++y) {
        int sy = std::min(src.height - 1, static_cast<int>((y + 0.5) * src.height / height));
        for (int x = 0; x < width; ++x) {
            int sx = std::min(src.width - 1, static_cast<int>((x + 0.5) * src.width / width));
            out.at(x, y) = src.at(sx, sy);
        }
    }
    return out;
}

FloatImage crop(const FloatImage& src, PixelRect r) {
    if (r.x0 < 0 || r.y0 < 0 || r.x1 > src.width || r.y1 > src.height || r.width() <= 0 || r.height() <= 0)
        throw InvalidArgument("crop: rectangle outside image");
    FloatImage out(r.width(), r.height(), src.channels);
    for (int y = 0; y < r.height(); ++y) {
        auto first = src.data.begin() + static_cast<std::ptrdiff_t>(src.index(r.x0, r.y0 + y));
        std::copy(first, first + static_cast<std::ptrdiff_t>(r.width()) * src.channels,
                  out.data.begin() + static_cast<std::ptrdiff_t>(out.index(0, y)));
    }
    return out;
}

Mask crop(const Mask& src, PixelRect r) {
    if (r.x0 < 0 || r.y0 < 0 || r.x1 > src.width || r.y1 > src.height || r.width() <= 0 || r.height() <= 0)
        throw InvalidArgument("crop: rectangle outside mask");
    Mask out(r.width(), r.height());
    for (int y = 0; y < r.height(); ++y)
        for (int x = 0; x < r.width(); ++x) out.at(x, y) = src.at(r.x0 + x, r.y0 + y);
    return out;
}

FloatImage to_unit_float(const Image8& img) {
    FloatImage out(img.width, img.height, img.channels);
    for (std::size_t i = 0; i < img.data.size(); ++i) out.data[i] = img.data[i] / 255.0f;
    return out;
}

Image8 from_unit_float(const FloatImage& img) {
    Image8 out(img.width, img.height, img.channels);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        float v = std::clamp(img.data[i], 0.0f, 1.0f);
        out.data[i] = static_cast<std::uint8_t>(std::lround(v * 255.0f));
    }
    return out;
}

}  // namespace matforge
