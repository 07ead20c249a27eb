// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "matforge/core/vec.hpp"
#include "matforge/pbr/material.hpp"

namespace matforge::render {

/// Smallest GGX alpha; roughness 0 maps here rather than to a true delta.
inline constexpr float kMinAlpha = 1e-3f;

float ggx_d(Vec3 h, float alpha);
float ggx_lambda(Vec3 w, float alpha);
float ggx_g1(Vec3 w, float alpha);
/// Visible-normal sample for a view direction in the upper hemisphere.
Vec3 sample_ggx_vndf(Vec3 wo, float alpha, float u1, float u2);

/// Unpolarized Fresnel reflectance for cos_i > 0 and relative index eta = n_t / n_i.
float fresnel_dielectric(float cos_i, float eta);
/// Schlick with F90 = saturate(50 F0), so F0 = 0 disables the lobe entirely.
float fresnel_schlick(float f0, float cos_theta);
Vec3 fresnel_schlick(Vec3 f0, float cos_theta);

struct BsdfSample {
    Vec3 wi;
    Vec3 weight;  // f * |cos| / pdf
    float pdf = 0;  // solid-angle density of the non-delta part; 0 for delta samples
    bool delta = false;
    bool transmitted = false;
};

/// Layered surface model in the local shading frame (normal = +z, wo.z > 0):
/// a GGX conductor weighted by metallic, a smooth-ish dielectric transmission lobe weighted
/// by (1 - metallic) * transmission, and a GGX-coated Lambert base for the rest.
class Bsdf {
public:
    /// `eta` is the relative index across the surface in the direction of travel.
    Bsdf(const pbr::ShadingParams& params, float eta);

    /// f(wo, wi) * cos(wi) of the non-delta lobes.
    Vec3 eval(Vec3 wo, Vec3 wi) const;
    /// Density with which sample() produces wi through its non-delta lobes.
    float pdf(Vec3 wo, Vec3 wi) const;
    std::optional<BsdfSample> sample(Vec3 wo, float u_lobe, float u1, float u2, float u3) const;
    bool has_non_delta() const { return w_conductor_ + w_plastic_ > 0; }

private:
    Vec3 base_;
    float alpha_;
    float f0_;  // dielectric specular reflectance at normal incidence
    float eta_;
    float w_conductor_, w_transmission_, w_plastic_;

    float plastic_spec_probability(Vec3 wo) const;
};

/// Beer-Lambert coefficient (per metre) giving transmittance `base` over 5 cm.
Vec3 absorption_coefficient(Vec3 base);

}  // namespace matforge::render
