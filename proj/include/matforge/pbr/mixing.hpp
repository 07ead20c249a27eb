// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "matforge/pbr/material.hpp"

namespace matforge::pbr {

/// Fraction of material B in a blend; always within [0,1].
class MixtureRatio {
public:
    explicit MixtureRatio(double r);
    double value() const { return r_; }
    /// Filename/label form: R x 100 rounded, e.g. 25 for 0.25.
    int percent() const;
    friend bool operator==(const MixtureRatio&, const MixtureRatio&) = default;

private:
    double r_;
};

/// The five ratios rendered per scene: 0, 0.25, 0.5, 0.75, 1.
const std::array<double, 5>& set_ratios();

/// Pixel-wise weighted blend (1-r)*a + r*b of every property. Textured inputs are
/// resampled to the larger of the two map sizes first; blended normal maps are
/// renormalised after decoding. r == 0 and r == 1 return a and b unchanged apart from id.
MaterialSpec mix_materials(const MaterialSpec& a, const MaterialSpec& b, MixtureRatio r);

/// Id given to mix_materials output.
std::string mixed_id(const std::string& a, const std::string& b, MixtureRatio r);

enum class FamilyChoice : std::uint8_t { TakeA, TakeB, Average };

/// Property order: base_color, roughness, metallic, transmission, normal, ior.
using FamilyChoices = std::array<FamilyChoice, 6>;

/// Per-property choices drawn uniformly from the seed.
FamilyChoices family_choices(std::uint64_t seed);

/// Builds a new textured material taking each property from a, b, or their average.
MaterialSpec combine_material_families(const MaterialSpec& a, const MaterialSpec& b, std::uint64_t seed);

struct SamplingOptions {
    /// Probability that a textured draw is combined with a second library entry.
    double combine_probability = 0.5;
};

/// Uniform: each scalar uniform over its declared range. Textured: uniform pick from
/// the library, optionally combined with a second pick.
MaterialSpec sample_random_material(std::uint64_t seed, MaterialKind kind, const std::vector<MaterialSpec>& library,
                                    const SamplingOptions& options = {});

}  // namespace matforge::pbr
