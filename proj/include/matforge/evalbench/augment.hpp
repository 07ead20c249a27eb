// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>

#include "matforge/core/image.hpp"

namespace matforge::evalbench {

struct Range {
    float lo = 0, hi = 0;
};

struct AugmentationConfig {
    double p_blur = 0.1;
    double p_brightness = 0.1;
    double p_desaturate = 0.1;
    double p_noise = 0.1;
    Range blur_sigma{0.5f, 2.0f};     // pixels
    Range brightness{0.6f, 1.4f};     // multiplicative
    Range desaturation{0.3f, 1.0f};   // blend toward grey; 1 is fully grey
    Range noise_stddev{0.01f, 0.05f};

    void validate() const;
};

/// The augmentations one seed selects, with their drawn parameters.
struct AugmentPlan {
    std::optional<float> blur_sigma;
    std::optional<float> brightness;
    std::optional<float> desaturation;
    std::optional<float> noise_stddev;
    std::uint64_t noise_seed = 0;

    bool identity() const { return !blur_sigma && !brightness && !desaturation && !noise_stddev; }
};

AugmentPlan augment_plan(const AugmentationConfig& config, std::uint64_t seed);

/// Applies blur, brightness, desaturation and noise in that order; output clamped to [0,1].
FloatImage apply_plan(const FloatImage& image, const AugmentPlan& plan);

FloatImage augment(const FloatImage& image, const AugmentationConfig& config, std::uint64_t seed);

/// Separable Gaussian blur with clamped borders.
FloatImage gaussian_blur(const FloatImage& image, float sigma);

}  // namespace matforge::evalbench
