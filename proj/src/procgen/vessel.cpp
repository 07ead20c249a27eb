// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/procgen/vessel.hpp"

#include <algorithm>
#include <cmath>

#include "matforge/core/error.hpp"
#include "matforge/core/rng.hpp"
#include "revolve.hpp"

namespace matforge::procgen {

float VesselProfile::radius(float u) const {
    float s = 0;
    float p = u;
    for (float a : linear_coeffs) {
        s += a * p;
        p *= u;
    }
    for (const auto& t : trig_terms) s += t.amplitude * std::sin(t.frequency * u + t.phase);
    return std::fabs(s) + r_min;
}

float VesselProfile::min_radius(int samples) const {
    float m = radius(0.0f);
    for (int i = 1; i < samples; ++i) m = std::min(m, radius(static_cast<float>(i) / static_cast<float>(samples - 1)));
    return m;
}

void VesselProfile::validate() const {
    if (linear_coeffs.size() > 3) throw ValidationError("vessel profile: at most 3 polynomial coefficients");
    if (trig_terms.size() > 3) throw ValidationError("vessel profile: at most 3 trig terms");
    if (!(r_min > 0)) throw ValidationError("vessel profile: r_min must be positive");
    if (!(height > 0)) throw ValidationError("vessel profile: height must be positive");
    if (stretch.x < 0.5f || stretch.x > 2.0f || stretch.y < 0.5f || stretch.y > 2.0f)
        throw ValidationError("vessel profile: stretch outside [0.5, 2]");
    if (min_radius() < 0.5f * r_min) throw ValidationError("vessel profile: degenerate radius");
}

VesselProfile sample_vessel_profile(std::uint64_t seed) {
    Rng rng(seed);
    for (;;) {
        VesselProfile p;
        int n_poly = static_cast<int>(rng.below(4));
        for (int i = 0; i < n_poly; ++i) p.linear_coeffs.push_back(static_cast<float>(rng.uniform(-0.1, 0.1)));
        int n_trig = static_cast<int>(rng.below(4));
        for (int i = 0; i < n_trig; ++i) {
            TrigTerm t;
            t.amplitude = static_cast<float>(rng.uniform(0.0, 0.05));
            t.frequency = static_cast<float>(rng.uniform(0.0, 6.0 * kPi));
            t.phase = static_cast<float>(rng.uniform(0.0, kTwoPi));
            p.trig_terms.push_back(t);
        }
        p.r_min = static_cast<float>(rng.uniform(0.02, 0.1));
        p.height = static_cast<float>(rng.uniform(0.1, 0.3));
        if (rng.bernoulli(0.5))
            p.stretch = {static_cast<float>(rng.uniform(0.5, 2.0)), static_cast<float>(rng.uniform(0.5, 2.0))};
        // radius() >= r_min by construction, so this only rejects non-finite draws
        if (std::isfinite(p.min_radius()) && p.min_radius() >= 0.5f * p.r_min) return p;
    }
}

namespace {

Affine stretch_xf(const VesselProfile& p) { return Affine::scaling({p.stretch.x, 1.0f, p.stretch.y}); }

void check_wall(const VesselProfile& profile, float wall) {
    profile.validate();
    if (!(wall > 0) || wall >= 0.5f * profile.height || wall >= profile.min_radius())
        throw InvalidArgument("vessel: wall thickness must be positive and thinner than the profile");
}

// Unstretched meshes; the caller applies the stretch to everything at once.
Mesh vessel_local(const VesselProfile& profile, float wall, const VesselOptions& o) {
    const detail::RingTable ring(o.segments);
    const float h = profile.height;
    auto outer = [&](float y) { return profile.radius(y / h); };
    auto inner = [&](float y) { return profile.radius(y / h) - wall; };
    Mesh m = detail::revolve_side(outer, 0.0f, h, o.rows, ring, true);
    m.append(detail::revolve_side(inner, wall, h, o.rows, ring, false));
    m.append(detail::revolve_annulus(outer(h), inner(h), h, ring));
    m.append(detail::revolve_cap(outer(0.0f), 0.0f, ring, false));
    m.append(detail::revolve_cap(inner(wall), wall, ring, true));
    m.watertight = is_watertight(m);
    return m;
}

Mesh fill_local(const VesselProfile& profile, float wall, float fill, const VesselOptions& o) {
    const detail::RingTable ring(o.segments);
    const float h = profile.height;
    const float y0 = wall + o.clearance;
    const float y1 = wall + fill * (h - wall);
    if (y1 <= y0) throw InvalidArgument("vessel: fill level below the cavity floor");
    auto r = [&](float y) { return profile.radius(y / h) - wall - o.clearance; };
    Mesh m = detail::revolve_side(r, y0, y1, o.rows, ring, true);
    m.append(detail::revolve_cap(r(y0), y0, ring, false));
    m.append(detail::revolve_cap(r(y1), y1, ring, true));
    m.watertight = is_watertight(m);
    return m;
}

Mesh object_local(const VesselProfile& profile, float wall, const PrimitiveObject& obj, const VesselOptions& o) {
    const float h = profile.height;
    const float y0 = wall + o.clearance;
    const float max_height = 0.85f * (h - wall);
    float r_avail = 1e30f;
    for (int i = 0; i <= 64; ++i) {
        float y = y0 + max_height * static_cast<float>(i) / 64.0f;
        r_avail = std::min(r_avail, profile.radius(y / h) - wall - 2.0f * o.clearance);
    }
    Bounds b = obj.mesh.bounds();
    Vec3 c = b.center();
    float radial = 0;
    for (const auto& p : obj.mesh.vertices) radial = std::max(radial, std::hypot(p.x - c.x, p.z - c.z));
    float s = std::min(0.95f * r_avail / radial, max_height / b.extent().y);
    Affine xf = Affine::translation({0, y0, 0}) * Affine::scaling({s, s, s}) *
                Affine::translation({-c.x, -b.lo.y, -c.z});
    Mesh m = transformed(obj.mesh, xf);
    m.watertight = obj.mesh.watertight;
    return m;
}

Mesh stretched(const Mesh& m, const VesselProfile& p) {
    Mesh out = transformed(m, stretch_xf(p));
    out.watertight = m.watertight;
    return out;
}

}  // namespace

Mesh build_vessel_mesh(const VesselProfile& profile, float wall, const VesselOptions& options) {
    check_wall(profile, wall);
    return stretched(vessel_local(profile, wall, options), profile);
}

Mesh build_fill_mesh(const VesselProfile& profile, float wall, float fill_fraction, const VesselOptions& options) {
    check_wall(profile, wall);
    if (fill_fraction <= 0 || fill_fraction > 1) throw InvalidArgument("vessel: fill fraction outside (0, 1]");
    return stretched(fill_local(profile, wall, fill_fraction, options), profile);
}

VesselBuild build_vessel(const VesselProfile& profile, float wall, ContentKind content, float fill_fraction,
                         std::uint64_t content_seed, const VesselOptions& options) {
    check_wall(profile, wall);
    VesselBuild out;
    out.profile = profile;
    out.wall_thickness = wall;
    out.content_kind = content;
    out.fill_fraction = fill_fraction;
    out.interior_bottom = wall;
    out.interior_height = profile.height - wall;
    out.vessel = stretched(vessel_local(profile, wall, options), profile);
    if (content == ContentKind::Fill) {
        out.content = build_fill_mesh(profile, wall, fill_fraction, options);
    } else {
        out.content_object = generate_primitive_object(content_seed);
        out.content = stretched(object_local(profile, wall, *out.content_object, options), profile);
    }
    return out;
}

VesselBuild generate_vessel(std::uint64_t seed, const VesselOptions& options) {
    Rng rng(derive_seed(seed, "vessel-params"));
    float wall = static_cast<float>(rng.uniform(0.001, 0.005));
    ContentKind kind = rng.bernoulli(0.5) ? ContentKind::Fill : ContentKind::Object;
    float fill = static_cast<float>(rng.uniform(0.2, 0.8));
    return build_vessel(sample_vessel_profile(derive_seed(seed, "profile")), wall, kind, fill,
                        derive_seed(seed, "content"), options);
}

}  // namespace matforge::procgen
