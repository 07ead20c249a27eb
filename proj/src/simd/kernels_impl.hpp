// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

namespace matforge::simd::detail {

void lerp_scalar(const float* a, const float* b, float r, float* out, std::size_t n);
double dot_scalar(const float* a, const float* b, std::size_t n);
void scale_clamp_scalar(float* x, float s, float lo, float hi, std::size_t n);
void add_clamp_scalar(float* x, const float* noise, float lo, float hi, std::size_t n);

#if defined(__x86_64__) || defined(_M_X64)
#define MATFORGE_HAVE_AVX2_TU 1
void lerp_avx2(const float* a, const float* b, float r, float* out, std::size_t n);
double dot_avx2(const float* a, const float* b, std::size_t n);
void scale_clamp_avx2(float* x, float s, float lo, float hi, std::size_t n);
void add_clamp_avx2(float* x, const float* noise, float lo, float hi, std::size_t n);
#endif

#if defined(__aarch64__) || defined(__ARM_NEON)
#define MATFORGE_HAVE_NEON_TU 1
void lerp_neon(const float* a, const float* b, float r, float* out, std::size_t n);
double dot_neon(const float* a, const float* b, std::size_t n);
void scale_clamp_neon(float* x, float s, float lo, float hi, std::size_t n);
void add_clamp_neon(float* x, const float* noise, float lo, float hi, std::size_t n);
#endif

}  // namespace matforge::simd::detail
