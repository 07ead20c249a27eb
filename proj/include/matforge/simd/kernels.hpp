// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string_view>

// Data-parallel inner loops shared by material mixing, augmentation and descriptor
// math. Each kernel has a scalar reference and SIMD variants (AVX2 on x86-64, NEON
// on AArch64) selected at runtime. Elementwise kernels are bit-identical across
// levels; reductions agree to double rounding.

namespace matforge::simd {

enum class Level { Scalar, Avx2, Neon };

std::string_view level_name(Level level);

/// Whether this build and CPU can run `level`.
bool level_available(Level level);

/// Level used by the dispatching entry points below. Defaults to the best available;
/// MATSIM_SIMD=scalar forces the reference path.
Level active_level();

/// Overrides dispatch (tests). Throws InvalidArgument if the level is unavailable.
void set_active_level(Level level);

/// out[i] = (1 - r) * a[i] + r * b[i]
void lerp(std::span<const float> a, std::span<const float> b, float r, std::span<float> out);

/// Sum of a[i] * b[i], accumulated in double.
double dot(std::span<const float> a, std::span<const float> b);

/// x[i] = clamp(x[i] * s, lo, hi)
void scale_clamp(std::span<float> x, float s, float lo, float hi);

/// x[i] = clamp(x[i] + n[i], lo, hi)
void add_clamp(std::span<float> x, std::span<const float> n, float lo, float hi);

/// Per-level kernel table; the dispatching functions forward to the active one.
struct KernelTable {
    void (*lerp)(const float* a, const float* b, float r, float* out, std::size_t n);
    double (*dot)(const float* a, const float* b, std::size_t n);
    void (*scale_clamp)(float* x, float s, float lo, float hi, std::size_t n);
    void (*add_clamp)(float* x, const float* n, float lo, float hi, std::size_t count);
};

const KernelTable& kernels(Level level);

}  // namespace matforge::simd
