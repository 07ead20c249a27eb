// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "matforge/procgen/primitives.hpp"

namespace matforge::procgen {

struct TrigTerm {
    float amplitude = 0;  // metres
    float frequency = 0;  // radians per unit height fraction
    float phase = 0;
};

/// Vertical profile of a vessel: radius(u) = |sum a_i u^i + sum b_j sin(c_j u + p_j)| + r_min
/// for u in [0,1] from bottom to top, i = 1..3.
struct VesselProfile {
    std::vector<float> linear_coeffs;  // up to 3: u, u^2, u^3
    std::vector<TrigTerm> trig_terms;  // up to 3
    float r_min = 0.05f;
    float height = 0.2f;
    Vec2 stretch{1, 1};  // horizontal scale on x and z

    float radius(float u) const;
    /// Minimum of radius() over an n-point grid on [0,1].
    float min_radius(int samples = 257) const;
    void validate() const;
};

enum class ContentKind { Fill, Object };

struct VesselOptions {
    int rows = 64;      // N_u
    int segments = 64;  // N_theta
    /// Gap between content and the inner wall.
    float clearance = 0.0005f;
};

struct VesselBuild {
    Mesh vessel;   // closed double-walled glass solid, bottom at y = 0
    Mesh content;  // closed solid inside the cavity
    VesselProfile profile;
    float wall_thickness = 0.002f;
    ContentKind content_kind = ContentKind::Fill;
    float fill_fraction = 0.5f;  // Fill only
    std::optional<PrimitiveObject> content_object;
    float interior_bottom = 0;  // y of the cavity floor
    float interior_height = 0;
};

/// Profile ranges: poly coefficients in [-0.1, 0.1], up to three trig terms with amplitude
/// <= 0.05 m and frequency <= 6 pi, r_min in [0.02, 0.1] m, height in [0.1, 0.3] m, stretch
/// in [0.5, 2] per horizontal axis for half of the vessels.
VesselProfile sample_vessel_profile(std::uint64_t seed);

/// Outer surface of revolution plus an inner surface offset inward by `wall`, joined at
/// the rim and closed by two bottom discs.
Mesh build_vessel_mesh(const VesselProfile& profile, float wall, const VesselOptions& options = {});

/// Solid filling the cavity from its floor to `fill_fraction` of the interior height.
Mesh build_fill_mesh(const VesselProfile& profile, float wall, float fill_fraction, const VesselOptions& options = {});

/// Builds a vessel from explicit parameters; content is a fill solid or a primitive scaled to fit.
VesselBuild build_vessel(const VesselProfile& profile, float wall, ContentKind content, float fill_fraction,
                         std::uint64_t content_seed, const VesselOptions& options = {});

/// Random profile, wall thickness in [1, 5] mm, content kind, fill fraction in [0.2, 0.8].
VesselBuild generate_vessel(std::uint64_t seed, const VesselOptions& options = {});

}  // namespace matforge::procgen
