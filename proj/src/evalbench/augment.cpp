// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/evalbench/augment.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "matforge/core/error.hpp"
#include "matforge/core/rng.hpp"
#include "matforge/simd/kernels.hpp"

namespace matforge::evalbench {

void AugmentationConfig::validate() const {
    for (double p : {p_blur, p_brightness, p_desaturate, p_noise})
        if (!(p >= 0 && p <= 1)) throw InvalidArgument("augmentation probabilities must lie in [0,1]");
    for (Range r : {blur_sigma, brightness, desaturation, noise_stddev})
        if (!(r.lo <= r.hi) || r.lo < 0) throw InvalidArgument("augmentation ranges must be ordered and non-negative");
    if (desaturation.hi > 1) throw InvalidArgument("desaturation factor cannot exceed 1");
}

AugmentPlan augment_plan(const AugmentationConfig& config, std::uint64_t seed) {
    config.validate();
    Rng rng(seed);
    auto draw = [&](Range r) { return static_cast<float>(rng.uniform(r.lo, r.hi)); };
    AugmentPlan plan;
    // every decision and parameter is drawn unconditionally so plans stay aligned across configs
    bool blur = rng.bernoulli(config.p_blur);
    float sigma = draw(config.blur_sigma);
    bool bright = rng.bernoulli(config.p_brightness);
    float factor = draw(config.brightness);
    bool desat = rng.bernoulli(config.p_desaturate);
    float amount = draw(config.desaturation);
    bool noise = rng.bernoulli(config.p_noise);
    float stddev = draw(config.noise_stddev);
    if (blur) plan.blur_sigma = sigma;
    if (bright) plan.brightness = factor;
    if (desat) plan.desaturation = amount;
    if (noise) plan.noise_stddev = stddev;
    plan.noise_seed = derive_seed(seed, "noise");
    return plan;
}

FloatImage gaussian_blur(const FloatImage& image, float sigma) {
    if (!(sigma > 0)) return image;
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0f * sigma)));
    std::vector<float> k(static_cast<std::size_t>(2 * radius + 1));
    float sum = 0;
    for (int i = -radius; i <= radius; ++i) sum += k[static_cast<std::size_t>(i + radius)] = std::exp(-0.5f * i * i / (sigma * sigma));
    for (float& v : k) v /= sum;
    const int w = image.width, h = image.height, ch = image.channels;
    FloatImage tmp(w, h, ch), out(w, h, ch);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < ch; ++c) {
                float acc = 0;
                for (int i = -radius; i <= radius; ++i)
                    acc += k[static_cast<std::size_t>(i + radius)] * image.at(std::clamp(x + i, 0, w - 1), y, c);
                tmp.at(x, y, c) = acc;
            }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < ch; ++c) {
                float acc = 0;
                for (int i = -radius; i <= radius; ++i)
                    acc += k[static_cast<std::size_t>(i + radius)] * tmp.at(x, std::clamp(y + i, 0, h - 1), c);
                out.at(x, y, c) = acc;
            }
    return out;
}

FloatImage apply_plan(const FloatImage& image, const AugmentPlan& plan) {
    if (plan.identity()) return image;
    FloatImage out = plan.blur_sigma ? gaussian_blur(image, *plan.blur_sigma) : image;
    if (plan.brightness) simd::scale_clamp(out.data, *plan.brightness, 0.0f, 1.0f);
    if (plan.desaturation && out.channels >= 3) {
        FloatImage grey = out;
        for (std::size_t p = 0; p < out.pixel_count(); ++p) {
            std::size_t i = p * static_cast<std::size_t>(out.channels);
            float l = luminance({out.data[i], out.data[i + 1], out.data[i + 2]});
            grey.data[i] = grey.data[i + 1] = grey.data[i + 2] = l;
        }
        simd::lerp(out.data, grey.data, *plan.desaturation, out.data);
    }
    if (plan.noise_stddev) {
        Rng rng(plan.noise_seed);
        std::vector<float> noise(out.data.size());
        for (std::size_t i = 0; i < noise.size(); i += 2) {
            // Box-Muller pair
            double u1 = 1.0 - rng.uniform_double(), u2 = rng.uniform_double();
            double r = std::sqrt(-2.0 * std::log(u1)) * *plan.noise_stddev;
            noise[i] = static_cast<float>(r * std::cos(2.0 * 3.14159265358979323846 * u2));
            if (i + 1 < noise.size()) noise[i + 1] = static_cast<float>(r * std::sin(2.0 * 3.14159265358979323846 * u2));
        }
        simd::add_clamp(out.data, noise, 0.0f, 1.0f);
    }
    simd::scale_clamp(out.data, 1.0f, 0.0f, 1.0f);
    return out;
}

FloatImage augment(const FloatImage& image, const AugmentationConfig& config, std::uint64_t seed) {
    return apply_plan(image, augment_plan(config, seed));
}

}  // namespace matforge::evalbench
