// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "kernels_impl.hpp"

#if defined(MATFORGE_HAVE_NEON_TU)

#include <arm_neon.h>

namespace matforge::simd::detail {

void lerp_neon(const float* a, const float* b, float r, float* out, std::size_t n) {
    const float32x4_t wa = vdupq_n_f32(1.0f - r);
    const float32x4_t wb = vdupq_n_f32(r);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        // separate mul/add: vfmaq would round differently from the scalar reference
        float32x4_t lhs = vmulq_f32(wa, vld1q_f32(a + i));
        float32x4_t rhs = vmulq_f32(wb, vld1q_f32(b + i));
        vst1q_f32(out + i, vaddq_f32(lhs, rhs));
    }
    if (i < n) lerp_scalar(a + i, b + i, r, out + i, n - i);
}

double dot_neon(const float* a, const float* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        float32x4_t va = vld1q_f32(a + i);
        float32x4_t vb = vld1q_f32(b + i);
        acc0 = vaddq_f64(acc0, vmulq_f64(vcvt_f64_f32(vget_low_f32(va)), vcvt_f64_f32(vget_low_f32(vb))));
        acc1 = vaddq_f64(acc1, vmulq_f64(vcvt_high_f64_f32(va), vcvt_high_f64_f32(vb)));
    }
    float64x2_t acc = vaddq_f64(acc0, acc1);
    return vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1) + dot_scalar(a + i, b + i, n - i);
}

void scale_clamp_neon(float* x, float s, float lo, float hi, std::size_t n) {
    const float32x4_t vs = vdupq_n_f32(s);
    const float32x4_t vlo = vdupq_n_f32(lo);
    const float32x4_t vhi = vdupq_n_f32(hi);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        float32x4_t v = vmulq_f32(vld1q_f32(x + i), vs);
        vst1q_f32(x + i, vminq_f32(vmaxq_f32(v, vlo), vhi));
    }
    if (i < n) scale_clamp_scalar(x + i, s, lo, hi, n - i);
}

void add_clamp_neon(float* x, const float* noise, float lo, float hi, std::size_t n) {
    const float32x4_t vlo = vdupq_n_f32(lo);
    const float32x4_t vhi = vdupq_n_f32(hi);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        float32x4_t v = vaddq_f32(vld1q_f32(x + i), vld1q_f32(noise + i));
        vst1q_f32(x + i, vminq_f32(vmaxq_f32(v, vlo), vhi));
    }
    if (i < n) add_clamp_scalar(x + i, noise + i, lo, hi, n - i);
}

}  // namespace matforge::simd::detail

#endif
