// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/evalbench/descriptor.hpp"

#include <algorithm>
#include <cmath>

#include "matforge/core/error.hpp"
#include "matforge/simloss/loss.hpp"

namespace matforge::evalbench {

namespace {

// Variance bin edges on a log scale: < 1e-5, then one bin per factor of 4.
int variance_bin(float v) {
    if (v < 1e-5f) return 0;
    int b = 1 + static_cast<int>(std::floor(std::log(v / 1e-5f) / std::log(4.0f)));
    return std::min(b, kVarianceBins - 1);
}

}  // namespace

std::vector<float> baseline_descriptor(const FloatImage& image, const Mask& mask) {
    if (image.channels < 3) throw InvalidArgument("baseline descriptor needs an RGB image");
    if (image.width != mask.width || image.height != mask.height)
        throw InvalidArgument("baseline descriptor: image and mask sizes differ");
    const std::size_t count = mask.count();
    if (count == 0) throw EmptyMaskError("baseline descriptor: mask is empty");

    std::vector<float> d(static_cast<std::size_t>(simloss::kDescriptorDim), 0.0f);
    float* channel = d.data();
    float* joint = channel + 3 * kChannelBins;
    float* orient = joint + kJointBins * kJointBins * kJointBins;
    float* variance = orient + kOrientationBins;
    const int w = image.width, h = image.height;
    auto grey = [&](int x, int y) { return luminance(image.rgb(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1))); };

    const float inv = 1.0f / static_cast<float>(count);
    double grad_total = 0;
    std::vector<double> orient_acc(kOrientationBins, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(x, y)) continue;
            Vec3 c = image.rgb(x, y);
            int jidx[3];
            for (int k = 0; k < 3; ++k) {
                float v = std::clamp(c[k], 0.0f, 1.0f);
                // linear split between the two nearest bin centres
                float pos = v * kChannelBins - 0.5f;
                int b0 = static_cast<int>(std::floor(pos));
                float t = pos - static_cast<float>(b0);
                if (b0 < 0) {
                    channel[k * kChannelBins] += inv;
                } else if (b0 >= kChannelBins - 1) {
                    channel[k * kChannelBins + kChannelBins - 1] += inv;
                } else {
                    channel[k * kChannelBins + b0] += (1.0f - t) * inv;
                    channel[k * kChannelBins + b0 + 1] += t * inv;
                }
                jidx[k] = std::min(kJointBins - 1, static_cast<int>(v * kJointBins));
            }
            joint[(jidx[0] * kJointBins + jidx[1]) * kJointBins + jidx[2]] += inv;

            float gx = 0.5f * (grey(x + 1, y) - grey(x - 1, y));
            float gy = 0.5f * (grey(x, y + 1) - grey(x, y - 1));
            float mag = std::sqrt(gx * gx + gy * gy);
            if (mag > 0) {
                float a = std::atan2(gy, gx) + kPi;  // [0, 2pi]
                int b = std::min(kOrientationBins - 1, static_cast<int>(a / kTwoPi * kOrientationBins));
                orient_acc[static_cast<std::size_t>(b)] += mag;
                grad_total += mag;
            }

            float s = 0, s2 = 0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    float g = grey(x + dx, y + dy);
                    s += g;
                    s2 += g * g;
                }
            float mean = s / 9.0f;
            variance[variance_bin(std::max(0.0f, s2 / 9.0f - mean * mean))] += inv;
        }
    }
    if (grad_total > 0)
        for (int b = 0; b < kOrientationBins; ++b) orient[b] = static_cast<float>(orient_acc[static_cast<std::size_t>(b)] / grad_total);
    simloss::l2_normalize(d);
    return d;
}

}  // namespace matforge::evalbench
