// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/evalbench/attention.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "matforge/core/error.hpp"

namespace matforge::evalbench {

std::string_view attention_name(AttentionMode mode) {
    switch (mode) {
        case AttentionMode::None: return "none";
        case AttentionMode::Crop: return "crop";
        case AttentionMode::Mask: return "mask";
        case AttentionMode::CropAndMask: return "crop+mask";
    }
    return "unknown";
}

AttentionMode parse_attention(std::string_view s) {
    if (s == "none") return AttentionMode::None;
    if (s == "crop") return AttentionMode::Crop;
    if (s == "mask") return AttentionMode::Mask;
    if (s == "crop+mask" || s == "crop_mask" || s == "cropmask") return AttentionMode::CropAndMask;
    throw InvalidArgument(fmt::format("unknown attention mode '{}'", s));
}

AttentionResult apply_attention(const FloatImage& image, const Mask& mask, AttentionMode mode,
                                const AttentionOptions& options) {
    if (image.width != mask.width || image.height != mask.height)
        throw InvalidArgument("attention: image and mask sizes differ");
    if (!mask.any()) throw EmptyMaskError("attention: mask is empty");
    AttentionResult out{image, mask};
    if (mode == AttentionMode::None) return out;

    if (mode == AttentionMode::Mask || mode == AttentionMode::CropAndMask) {
        for (int y = 0; y < image.height; ++y)
            for (int x = 0; x < image.width; ++x)
                if (!mask.at(x, y))
                    for (int c = 0; c < image.channels; ++c) out.image.at(x, y, c) = 0.0f;
    }
    if (mode == AttentionMode::Crop || mode == AttentionMode::CropAndMask) {
        PixelRect r = bounding_box(mask);
        if (options.crop_pad > 0) {
            int px = static_cast<int>(std::lround(options.crop_pad * r.width()));
            int py = static_cast<int>(std::lround(options.crop_pad * r.height()));
            r = {std::max(0, r.x0 - px), std::max(0, r.y0 - py), std::min(image.width, r.x1 + px),
                 std::min(image.height, r.y1 + py)};
        }
        out.image = crop(out.image, r);
        out.mask = crop(out.mask, r);
        if (!options.keep_size) {
            if (options.output_size < 1) throw InvalidArgument("attention: output size must be positive");
            out.image = resample_bilinear(out.image, options.output_size, options.output_size);
            out.mask = resample_nearest(out.mask, options.output_size, options.output_size);
        }
    }
    return out;
}

}  // namespace matforge::evalbench
