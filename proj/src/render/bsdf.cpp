// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/render/bsdf.hpp"

#include <algorithm>
#include <cmath>

namespace matforge::render {

float ggx_d(Vec3 h, float alpha) {
    if (h.z <= 0) return 0;
    float a2 = alpha * alpha;
    float d = h.z * h.z * (a2 - 1.0f) + 1.0f;
    return a2 / (kPi * d * d);
}

float ggx_lambda(Vec3 w, float alpha) {
    float c2 = w.z * w.z;
    if (c2 <= 0) return 1e30f;
    float t2 = std::max(0.0f, 1.0f - c2) / c2;
    return 0.5f * (-1.0f + std::sqrt(1.0f + alpha * alpha * t2));
}

float ggx_g1(Vec3 w, float alpha) { return 1.0f / (1.0f + ggx_lambda(w, alpha)); }

Vec3 sample_ggx_vndf(Vec3 wo, float alpha, float u1, float u2) {
    Vec3 vh = normalize(Vec3{alpha * wo.x, alpha * wo.y, wo.z});
    float lensq = vh.x * vh.x + vh.y * vh.y;
    Vec3 t1 = lensq > 0 ? Vec3{-vh.y, vh.x, 0} / std::sqrt(lensq) : Vec3{1, 0, 0};
    Vec3 t2 = cross(vh, t1);
    float r = std::sqrt(u1), phi = kTwoPi * u2;
    float p1 = r * std::cos(phi), p2 = r * std::sin(phi);
    float s = 0.5f * (1.0f + vh.z);
    p2 = (1.0f - s) * std::sqrt(std::max(0.0f, 1.0f - p1 * p1)) + s * p2;
    Vec3 nh = t1 * p1 + t2 * p2 + vh * std::sqrt(std::max(0.0f, 1.0f - p1 * p1 - p2 * p2));
    return normalize(Vec3{alpha * nh.x, alpha * nh.y, std::max(1e-6f, nh.z)});
}

float fresnel_dielectric(float cos_i, float eta) {
    cos_i = std::clamp(cos_i, 0.0f, 1.0f);
    float sin2_t = (1.0f - cos_i * cos_i) / (eta * eta);
    if (sin2_t >= 1.0f) return 1.0f;
    float cos_t = std::sqrt(1.0f - sin2_t);
    float rs = (cos_i - eta * cos_t) / (cos_i + eta * cos_t);
    float rp = (eta * cos_i - cos_t) / (eta * cos_i + cos_t);
    return 0.5f * (rs * rs + rp * rp);
}

float fresnel_schlick(float f0, float c) {
    float f90 = std::clamp(50.0f * f0, 0.0f, 1.0f);
    float m = std::clamp(1.0f - c, 0.0f, 1.0f);
    float m2 = m * m;
    return f0 + (f90 - f0) * m2 * m2 * m;
}

Vec3 fresnel_schlick(Vec3 f0, float c) {
    return {fresnel_schlick(f0.x, c), fresnel_schlick(f0.y, c), fresnel_schlick(f0.z, c)};
}

Vec3 absorption_coefficient(Vec3 base) {
    auto s = [](float v) { return -std::log(std::max(v, 1e-3f)) / 0.05f; };
    return {s(base.x), s(base.y), s(base.z)};
}

namespace {

Vec3 reflect(Vec3 wo, Vec3 h) { return h * (2.0f * dot(wo, h)) - wo; }

bool refract(Vec3 wo, Vec3 h, float eta, Vec3& wi) {
    float ci = dot(wo, h);
    float sin2_t = (1.0f - ci * ci) / (eta * eta);
    if (sin2_t >= 1.0f) return false;
    float ct = std::sqrt(1.0f - sin2_t);
    wi = -wo / eta + h * (ci / eta - ct);
    return true;
}

Vec3 cosine_hemisphere(float u1, float u2) {
    float r = std::sqrt(u1), phi = kTwoPi * u2;
    return {r * std::cos(phi), r * std::sin(phi), std::sqrt(std::max(0.0f, 1.0f - u1))};
}

}  // namespace

Bsdf::Bsdf(const pbr::ShadingParams& p, float eta)
    : base_(p.base_color),
      alpha_(std::max(kMinAlpha, p.roughness * p.roughness)),
      eta_(eta) {
    float r = (p.ior - 1.0f) / (p.ior + 1.0f);
    f0_ = r * r;
    float m = std::clamp(p.metallic, 0.0f, 1.0f), t = std::clamp(p.transmission, 0.0f, 1.0f);
    w_conductor_ = m;
    w_transmission_ = (1.0f - m) * t;
    w_plastic_ = (1.0f - m) * (1.0f - t);
}

float Bsdf::plastic_spec_probability(Vec3 wo) const {
    float fs = fresnel_schlick(f0_, wo.z);
    float fd = (1.0f - fs) * std::max(luminance(base_), 0.0f);
    if (fs + fd <= 0) return 0.5f;
    return fs / (fs + fd);
}

Vec3 Bsdf::eval(Vec3 wo, Vec3 wi) const {
    if (wo.z <= 0 || wi.z <= 0) return {};
    Vec3 h = normalize(wo + wi);
    float d = ggx_d(h, alpha_);
    float g2 = 1.0f / (1.0f + ggx_lambda(wo, alpha_) + ggx_lambda(wi, alpha_));
    float spec = d * g2 / (4.0f * wo.z);  // times cos(wi) already folded in
    float oh = std::max(0.0f, dot(wo, h));
    Vec3 out{};
    if (w_conductor_ > 0) out += fresnel_schlick(base_, oh) * (w_conductor_ * spec);
    if (w_plastic_ > 0) {
        float fs = fresnel_schlick(f0_, oh);
        Vec3 diffuse = base_ * (kInvPi * wi.z * (1.0f - fresnel_schlick(f0_, wo.z)));
        out += (Vec3{1, 1, 1} * (fs * spec) + diffuse) * w_plastic_;
    }
    return out;
}

float Bsdf::pdf(Vec3 wo, Vec3 wi) const {
    if (wo.z <= 0 || wi.z <= 0) return 0;
    Vec3 h = normalize(wo + wi);
    float spec_pdf = ggx_g1(wo, alpha_) * ggx_d(h, alpha_) / (4.0f * wo.z);
    float p = w_conductor_ * spec_pdf;
    if (w_plastic_ > 0) {
        float ps = plastic_spec_probability(wo);
        p += w_plastic_ * (ps * spec_pdf + (1.0f - ps) * wi.z * kInvPi);
    }
    return p;
}

std::optional<BsdfSample> Bsdf::sample(Vec3 wo, float u_lobe, float u1, float u2, float u3) const {
    if (wo.z <= 0) return std::nullopt;
    const float total = w_conductor_ + w_transmission_ + w_plastic_;
    float pick = u_lobe * total;
    if (pick >= w_conductor_ && pick < w_conductor_ + w_transmission_) {
        // delta-like dielectric: microfacet normal, then exact Fresnel choice with weight 1
        Vec3 h = sample_ggx_vndf(wo, alpha_, u1, u2);
        float f = fresnel_dielectric(dot(wo, h), eta_);
        BsdfSample s;
        s.delta = true;
        s.weight = {1, 1, 1};
        Vec3 wi;
        if (u3 >= f && refract(wo, h, eta_, wi) && wi.z < 0) {
            s.wi = normalize(wi);
            s.transmitted = true;
            return s;
        }
        wi = reflect(wo, h);
        if (wi.z <= 0) wi = reflect(wo, {0, 0, 1});
        s.wi = normalize(wi);
        return s;
    }

    Vec3 wi;
    if (pick < w_conductor_) {
        wi = reflect(wo, sample_ggx_vndf(wo, alpha_, u1, u2));
    } else {
        float ps = plastic_spec_probability(wo);
        if (u3 < ps)
            wi = reflect(wo, sample_ggx_vndf(wo, alpha_, u1, u2));
        else
            wi = cosine_hemisphere(u1, u2);
    }
    if (wi.z <= 0) return std::nullopt;
    wi = normalize(wi);
    float p = pdf(wo, wi);
    if (!(p > 0)) return std::nullopt;
    BsdfSample s;
    s.wi = wi;
    s.pdf = p;
    s.weight = eval(wo, wi) / p;
    return s;
}

}  // namespace matforge::render
