// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"
#include "matforge/core/error.hpp"
#include "matforge/simd/kernels.hpp"

namespace matforge::simd {
namespace {

constexpr KernelTable kScalar{detail::lerp_scalar, detail::dot_scalar, detail::scale_clamp_scalar,
                              detail::add_clamp_scalar};
#if defined(MATFORGE_HAVE_AVX2_TU)
constexpr KernelTable kAvx2{detail::lerp_avx2, detail::dot_avx2, detail::scale_clamp_avx2, detail::add_clamp_avx2};
#endif
#if defined(MATFORGE_HAVE_NEON_TU)
constexpr KernelTable kNeon{detail::lerp_neon, detail::dot_neon, detail::scale_clamp_neon, detail::add_clamp_neon};
#endif

Level detect_best() {
    if (const char* env = std::getenv("MATSIM_SIMD")) {
        if (std::string(env) == "scalar") return Level::Scalar;
    }
    if (level_available(Level::Avx2)) return Level::Avx2;
    if (level_available(Level::Neon)) return Level::Neon;
    return Level::Scalar;
}

std::atomic<Level>& active() {
    static std::atomic<Level> level{detect_best()};
    return level;
}

void check_sizes(std::size_t a, std::size_t b) {
    if (a != b) throw InvalidArgument("simd kernel: span sizes differ");
}

}  // namespace

std::string_view level_name(Level level) {
    switch (level) {
        case Level::Scalar: return "scalar";
        case Level::Avx2: return "avx2";
        case Level::Neon: return "neon";
    }
    return "unknown";
}

bool level_available(Level level) {
    switch (level) {
        case Level::Scalar: return true;
        case Level::Avx2:
#if defined(MATFORGE_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Level::Neon:
#if defined(MATFORGE_HAVE_NEON_TU)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Level active_level() { return active().load(std::memory_order_relaxed); }

void set_active_level(Level level) {
    if (!level_available(level)) throw InvalidArgument("simd level unavailable: " + std::string(level_name(level)));
    active().store(level, std::memory_order_relaxed);
}

const KernelTable& kernels(Level level) {
    switch (level) {
#if defined(MATFORGE_HAVE_AVX2_TU)
        case Level::Avx2: return kAvx2;
#endif
#if defined(MATFORGE_HAVE_NEON_TU)
        case Level::Neon: return kNeon;
#endif
        default: return kScalar;
    }
}

void lerp(std::span<const float> a, std::span<const float> b, float r, std::span<float> out) {
    check_sizes(a.size(), b.size());
    check_sizes(a.size(), out.size());
    kernels(active_level()).lerp(a.data(), b.data(), r, out.data(), a.size());
}

double dot(std::span<const float> a, std::span<const float> b) {
    check_sizes(a.size(), b.size());
    return kernels(active_level()).dot(a.data(), b.data(), a.size());
}

void scale_clamp(std::span<float> x, float s, float lo, float hi) {
    kernels(active_level()).scale_clamp(x.data(), s, lo, hi, x.size());
}

void add_clamp(std::span<float> x, std::span<const float> n, float lo, float hi) {
    check_sizes(x.size(), n.size());
    kernels(active_level()).add_clamp(x.data(), n.data(), lo, hi, x.size());
}

}  // namespace matforge::simd
