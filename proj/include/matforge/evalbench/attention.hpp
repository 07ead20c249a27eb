// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

#include "matforge/core/image.hpp"

namespace matforge::evalbench {

enum class AttentionMode { None, Crop, Mask, CropAndMask };

std::string_view attention_name(AttentionMode mode);
/// Accepts none, crop, mask, crop+mask (also crop_mask).
AttentionMode parse_attention(std::string_view s);

struct AttentionOptions {
    /// Crop output is resampled to output_size x output_size unless keep_size is set.
    int output_size = 224;
    bool keep_size = false;
    /// Extra margin around the mask bounding box, as a fraction of its width/height per side.
    float crop_pad = 0.0f;
};

struct AttentionResult {
    FloatImage image;
    Mask mask;
};

/// Focuses an image on its material region. Mask zeroes pixels outside the mask;
/// Crop cuts to the mask's bounding box; CropAndMask does both. Throws EmptyMaskError.
AttentionResult apply_attention(const FloatImage& image, const Mask& mask, AttentionMode mode,
                                const AttentionOptions& options = {});

}  // namespace matforge::evalbench
