// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "matforge/core/image.hpp"

namespace matforge::evalbench {

/// Layout of the baseline descriptor before zero padding.
inline constexpr int kChannelBins = 8;        // soft histogram per RGB channel
inline constexpr int kJointBins = 4;          // per axis of the joint colour histogram
inline constexpr int kOrientationBins = 16;
inline constexpr int kVarianceBins = 8;
inline constexpr int kBaselineFeatures =
    3 * kChannelBins + kJointBins * kJointBins * kJointBins + kOrientationBins + kVarianceBins;

/// Hand-crafted 512-d unit descriptor of the masked region of an RGB image with values
/// in [0,1]: colour histograms, gradient orientations and local variance. Stands in for
/// a learned encoder. Throws EmptyMaskError.
std::vector<float> baseline_descriptor(const FloatImage& image, const Mask& mask);

}  // namespace matforge::evalbench
