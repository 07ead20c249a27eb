// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "matforge/pbr/material.hpp"
#include "matforge/procgen/mesh.hpp"
#include "matforge/procgen/primitives.hpp"
#include "matforge/procgen/uv_transform.hpp"
#include "matforge/procgen/vessel.hpp"
#include "matforge/render/environment.hpp"

namespace matforge::procgen {

inline constexpr int kScenesPerSet = 6;
inline constexpr int kImagesPerScene = 5;

enum class BackgroundPolicy { Fixed, RotateEnv, ReplaceEnv };

std::string_view policy_name(BackgroundPolicy p);
BackgroundPolicy parse_policy(std::string_view s);

/// Policy of scene k: two Fixed, two RotateEnv, two ReplaceEnv.
constexpr BackgroundPolicy policy_for_scene(int k) {
    return k < 2 ? BackgroundPolicy::Fixed : (k < 4 ? BackgroundPolicy::RotateEnv : BackgroundPolicy::ReplaceEnv);
}

struct Camera {
    Vec3 position{0, 0.3f, 1};
    Vec3 look_at{0, 0.1f, 0};
    float vfov_deg = 40;
};

/// Fraction of image height subtended by a sphere seen from the camera.
float subtended_fraction(const Camera& camera, const BoundingSphere& sphere);

/// Minimum fraction of image height the main object must cover.
inline constexpr float kMinSubtendedFraction = 0.15f;
inline constexpr int kMaxFramingAttempts = 32;

struct ObjectPlacement {
    std::string shape;             // primitive family or "vessel"
    std::uint64_t shape_seed = 0;  // regenerates the unplaced mesh
    Affine transform;              // object space to world
};

struct SceneObject {
    ObjectPlacement placement;
    Mesh mesh;  // world space
    pbr::MaterialSpec material;
    UvTransform uv;
};

struct VesselSetup {
    VesselProfile profile;
    float wall_thickness = 0.002f;
    ContentKind content = ContentKind::Fill;
    float fill_fraction = 0.5f;
    pbr::MaterialSpec glass;
    Mesh mesh;  // world space
};

struct Ground {
    float height = 0;
    pbr::MaterialSpec material;
    UvTransform uv;
    Mesh mesh;
};

/// One static main object and camera; per-image lighting and uv transforms.
struct SceneSpec {
    BackgroundPolicy policy = BackgroundPolicy::Fixed;
    ObjectPlacement main_placement;
    Mesh main_object;  // world space; the vessel content when `vessel` is set
    std::optional<VesselSetup> vessel;
    Camera camera;
    std::array<render::EnvironmentSpec, kImagesPerScene> lighting;
    std::array<UvTransform, kImagesPerScene> uv;
    std::vector<SceneObject> background_objects;
    Ground ground;

    /// Framing, mesh invariants and per-image lighting consistent with the policy.
    void validate() const;
};

struct SceneSet {
    std::string set_id;
    std::uint64_t seed = 0;
    pbr::MaterialSpec material_a;
    pbr::MaterialSpec material_b;
    bool vessel = false;
    std::array<SceneSpec, kScenesPerSet> scenes;
    std::array<double, kImagesPerScene> ratios{0.0, 0.25, 0.5, 0.75, 1.0};

    void validate() const;
};

struct GenerationConfig {
    std::vector<pbr::MaterialSpec> material_library;
    std::vector<render::EnvironmentSpec> environment_library;
    double vessel_probability = 0.5;
    /// Probability that a set (and each ground/background material) is textured.
    /// Must be 0 when the material library is empty.
    double textured_probability = 0.5;
    double combine_probability = 0.5;
    int max_background_objects = 4;
    VesselOptions vessel_options;
};

/// Places a camera around `target` so it covers at least kMinSubtendedFraction of the
/// image height; throws GenerationError after kMaxFramingAttempts. When `keep_in_view`
/// is given the camera also backs off far enough for that sphere to fit the frame.
Camera frame_camera(const BoundingSphere& target, std::uint64_t seed,
                    const std::optional<BoundingSphere>& keep_in_view = std::nullopt);

/// Deterministic SceneSet from (seed, config).
SceneSet generate_scene_set(std::uint64_t seed, const GenerationConfig& config, std::string set_id = "000000");

/// Ground quad mesh used by every scene.
Mesh make_ground_mesh(float height, float half_size = 15.0f);

}  // namespace matforge::procgen
