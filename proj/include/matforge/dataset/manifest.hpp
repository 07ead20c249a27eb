// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "matforge/procgen/scene.hpp"
#include "matforge/render/renderer.hpp"

namespace matforge::dataset {

inline constexpr std::string_view kSchemaVersion = "1.0";
inline constexpr int kSchemaMajor = 1;

struct MaterialRecord {
    std::string id;
    std::string kind;  // "uniform" | "textured"
    // Property values; present for uniform materials.
    std::optional<std::array<float, 3>> base_color;
    std::optional<float> roughness, metallic, transmission;
    float ior = 1.5f;
    friend bool operator==(const MaterialRecord&, const MaterialRecord&) = default;
};

struct UvRecord {
    std::array<float, 2> offset{0, 0};
    float rotation = 0, scale = 1;
    friend bool operator==(const UvRecord&, const UvRecord&) = default;
};

struct PlacementRecord {
    std::string shape;
    std::uint64_t shape_seed = 0;
    std::array<float, 12> transform{};  // row-major 3x4
    friend bool operator==(const PlacementRecord&, const PlacementRecord&) = default;
};

struct EnvironmentRecord {
    std::string id;
    float rotation = 0;
    float intensity_scale = 1;
    friend bool operator==(const EnvironmentRecord&, const EnvironmentRecord&) = default;
};

struct ImageRecord {
    double ratio = 0;
    std::string file;  // relative to the scene directory
    EnvironmentRecord environment;
    UvRecord uv;
    friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct VesselRecord {
    std::vector<float> linear_coeffs;
    std::vector<std::array<float, 3>> trig_terms;  // amplitude, frequency, phase
    float r_min = 0, height = 0;
    std::array<float, 2> stretch{1, 1};
    float wall_thickness = 0;
    std::string content;  // "fill" | "object"
    float fill_fraction = 0;
    MaterialRecord glass;
    friend bool operator==(const VesselRecord&, const VesselRecord&) = default;
};

struct BackgroundRecord {
    PlacementRecord placement;
    MaterialRecord material;
    UvRecord uv;
    friend bool operator==(const BackgroundRecord&, const BackgroundRecord&) = default;
};

struct CameraRecord {
    std::array<float, 3> position{}, look_at{};
    float vfov_deg = 40;
    friend bool operator==(const CameraRecord&, const CameraRecord&) = default;
};

struct SceneRecord {
    int index = 0;
    std::string policy;
    CameraRecord camera;
    PlacementRecord object;
    std::optional<VesselRecord> vessel;
    std::array<ImageRecord, procgen::kImagesPerScene> images;
    std::string mask = "mask.png";
    float ground_height = 0;
    MaterialRecord ground_material;
    UvRecord ground_uv;
    std::vector<BackgroundRecord> background;
    friend bool operator==(const SceneRecord&, const SceneRecord&) = default;
};

/// Inputs needed to regenerate a set bit-for-bit.
struct SourceRecord {
    std::uint64_t seed = 0;       // run seed
    std::uint64_t set_index = 0;  // set seed = derive_seed(seed, set_index)
    double vessel_probability = 0.5;
    double textured_probability = 0;
    double combine_probability = 0.5;
    int max_background_objects = 4;
    std::string texture_dir;  // empty: none
    std::string hdri_dir;     // empty: procedural skies
    int sky_count = 32;
    int width = 128, height = 128, samples_per_pixel = 32, max_bounces = 6;
    std::uint64_t render_seed = 0;
    bool env_sampling = true;
    float exposure = 1;
    friend bool operator==(const SourceRecord&, const SourceRecord&) = default;
};

struct SetManifest {
    std::string schema_version{kSchemaVersion};
    std::string set_id;
    MaterialRecord material_a, material_b;
    bool vessel = false;
    std::array<double, procgen::kImagesPerScene> ratios{0, 0.25, 0.5, 0.75, 1.0};
    std::array<SceneRecord, procgen::kScenesPerSet> scenes;
    std::optional<SourceRecord> source;
    friend bool operator==(const SetManifest&, const SetManifest&) = default;

    /// Structural rules of a set: ratio schedule, policy split, file names and lighting reuse.
    /// Throws ValidationError naming the offending scene.
    void validate() const;
};

/// `img_r025.png` for 0.25.
std::string image_file_name(double ratio, std::string_view extension = ".png");
std::string scene_dir_name(int scene_index);
std::string set_dir_name(std::string_view set_id);

MaterialRecord material_record(const pbr::MaterialSpec& m);
SetManifest manifest_from_set(const procgen::SceneSet& set);

std::string manifest_to_json(const SetManifest& manifest);
/// Throws ParseError (with line and column), SchemaVersionError or ValidationError.
SetManifest manifest_from_json(std::string_view text, std::string_view origin = "metadata.json");

}  // namespace matforge::dataset
