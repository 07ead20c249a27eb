// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "matforge/core/image.hpp"

namespace matforge {

/// Reads an 8- or 16-bit PNG (gray, gray+alpha, RGB, RGBA; palettes expanded).
/// Values are scaled to [0,1] with no transfer-function decode; alpha is dropped.
FloatImage read_png(const std::filesystem::path& path);

/// Reads a PNG as 8-bit samples, alpha dropped.
Image8 read_png8(const std::filesystem::path& path);

/// Writes an 8-bit gray (1 channel) or RGB (3 channel) PNG. Output bytes depend only on the pixels.
void write_png(const std::filesystem::path& path, const Image8& image);
void write_png(const std::filesystem::path& path, const Mask& mask);  // 255 = set
/// Reads a mask PNG; a pixel is set when its first channel exceeds 127.
Mask read_mask(const std::filesystem::path& path);

/// Reads a Radiance RGBE (.hdr) file into linear RGB floats.
FloatImage read_hdr(const std::filesystem::path& path);

/// Writes linear RGB floats as run-length encoded Radiance RGBE.
void write_hdr(const std::filesystem::path& path, const FloatImage& image);

float srgb_to_linear(float v);
float linear_to_srgb(float v);

}  // namespace matforge
