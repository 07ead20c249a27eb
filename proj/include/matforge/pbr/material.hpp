// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <variant>

#include "matforge/pbr/texture_map.hpp"

namespace matforge::pbr {

enum class MaterialKind { Uniform, Textured };

using ScalarChannel = std::variant<float, TextureMap>;
using ColorChannel = std::variant<Vec3, TextureMap>;

inline constexpr float kIorMin = 1.0f;
inline constexpr float kIorMax = 2.5f;

// Defaults for maps a textured material does not provide.
inline constexpr float kDefaultRoughness = 0.5f;
inline constexpr float kDefaultMetallic = 0.0f;
inline constexpr float kDefaultTransmission = 0.0f;
inline constexpr float kDefaultIor = 1.5f;

/// Point-wise material parameters after texture lookup.
struct ShadingParams {
    Vec3 base_color;
    float roughness = 0.5f;
    float metallic = 0.0f;
    float transmission = 0.0f;
    float ior = 1.5f;
    std::optional<Vec3> tangent_normal;  // decoded, unit length
};

/// A uniform (one value per property) or textured (per-texel maps) material.
/// Textured materials may still carry scalar channels for maps they lack.
struct MaterialSpec {
    MaterialKind kind = MaterialKind::Uniform;
    std::string id;
    ColorChannel base_color = Vec3{0.8f, 0.8f, 0.8f};
    ScalarChannel roughness = kDefaultRoughness;
    ScalarChannel metallic = kDefaultMetallic;
    ScalarChannel transmission = kDefaultTransmission;
    float ior = kDefaultIor;
    std::optional<TextureMap> normal;

    static MaterialSpec uniform(std::string id, Vec3 base_color, float roughness, float metallic,
                                float transmission, float ior);

    /// Throws InvalidArgument on out-of-range scalars, MapShapeError on unequal map sizes,
    /// MixKindError when a Uniform material carries maps.
    void validate() const;

    /// Size shared by every map, or nullopt when the material has none.
    std::optional<std::pair<int, int>> map_size() const;

    ShadingParams evaluate(Vec2 uv) const;

    friend bool operator==(const MaterialSpec&, const MaterialSpec&) = default;
};

float scalar_value(const ScalarChannel& c, Vec2 uv);
Vec3 color_value(const ColorChannel& c, Vec2 uv);

}  // namespace matforge::pbr
