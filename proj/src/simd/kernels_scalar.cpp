// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "kernels_impl.hpp"

namespace matforge::simd::detail {

void lerp_scalar(const float* a, const float* b, float r, float* out, std::size_t n) {
    const float wa = 1.0f - r;
    for (std::size_t i = 0; i < n; ++i) {
        float lhs = wa * a[i];
        float rhs = r * b[i];
        out[i] = lhs + rhs;
    }
}

double dot_scalar(const float* a, const float* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    return acc;
}

namespace {
// Same operand selection as maxps/minps, so signed zeros match the SIMD paths.
inline float clamp_like_simd(float v, float lo, float hi) {
    v = v > lo ? v : lo;
    return v < hi ? v : hi;
}
}  // namespace

void scale_clamp_scalar(float* x, float s, float lo, float hi, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] = clamp_like_simd(x[i] * s, lo, hi);
}

void add_clamp_scalar(float* x, const float* noise, float lo, float hi, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] = clamp_like_simd(x[i] + noise[i], lo, hi);
}

}  // namespace matforge::simd::detail
