// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

// Compiled with -mavx2 only; callers reach it through the runtime dispatcher.

#include "kernels_impl.hpp"

#if defined(MATFORGE_HAVE_AVX2_TU)

#include <immintrin.h>

namespace matforge::simd::detail {

void lerp_avx2(const float* a, const float* b, float r, float* out, std::size_t n) {
    const __m256 wa = _mm256_set1_ps(1.0f - r);
    const __m256 wb = _mm256_set1_ps(r);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 lhs = _mm256_mul_ps(wa, _mm256_loadu_ps(a + i));
        __m256 rhs = _mm256_mul_ps(wb, _mm256_loadu_ps(b + i));
        _mm256_storeu_ps(out + i, _mm256_add_ps(lhs, rhs));
    }
    if (i < n) lerp_scalar(a + i, b + i, r, out + i, n - i);
}

double dot_avx2(const float* a, const float* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 va = _mm256_loadu_ps(a + i);
        __m256 vb = _mm256_loadu_ps(b + i);
        __m256d a_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(va));
        __m256d a_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(va, 1));
        __m256d b_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(vb));
        __m256d b_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(vb, 1));
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(a_lo, b_lo));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(a_hi, b_hi));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
    double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    return acc + dot_scalar(a + i, b + i, n - i);
}

void scale_clamp_avx2(float* x, float s, float lo, float hi, std::size_t n) {
    const __m256 vs = _mm256_set1_ps(s);
    const __m256 vlo = _mm256_set1_ps(lo);
    const __m256 vhi = _mm256_set1_ps(hi);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 v = _mm256_mul_ps(_mm256_loadu_ps(x + i), vs);
        v = _mm256_min_ps(_mm256_max_ps(v, vlo), vhi);
        _mm256_storeu_ps(x + i, v);
    }
    if (i < n) scale_clamp_scalar(x + i, s, lo, hi, n - i);
}

void add_clamp_avx2(float* x, const float* noise, float lo, float hi, std::size_t n) {
    const __m256 vlo = _mm256_set1_ps(lo);
    const __m256 vhi = _mm256_set1_ps(hi);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 v = _mm256_add_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(noise + i));
        v = _mm256_min_ps(_mm256_max_ps(v, vlo), vhi);
        _mm256_storeu_ps(x + i, v);
    }
    if (i < n) add_clamp_scalar(x + i, noise + i, lo, hi, n - i);
}

}  // namespace matforge::simd::detail

#endif
