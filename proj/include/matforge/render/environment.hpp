// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "matforge/core/image.hpp"
#include "matforge/core/vec.hpp"

namespace matforge::render {

/// Upper bound on environment radiance after intensity scaling.
inline constexpr float kMaxRadiance = 6550.0f;

enum class EnvironmentKind { Equirect, ProceduralSky };

struct LightBlob {
    Vec3 direction{0, 1, 0};  // unit, world frame before rotation
    float angular_radius = 0.05f;  // radians
    Vec3 radiance{10, 10, 10};
};

struct SkyParams {
    Vec3 zenith{0.3f, 0.45f, 0.8f};
    Vec3 horizon{0.8f, 0.85f, 0.9f};
    Vec3 ground{0.3f, 0.28f, 0.25f};
    std::vector<LightBlob> blobs;
};

/// Distant lighting surrounding the scene. Directions use +y up; equirect u runs with
/// azimuth atan2(x, -z) and v from the zenith (top row) to the nadir.
struct EnvironmentSpec {
    std::string id;
    EnvironmentKind kind = EnvironmentKind::ProceduralSky;
    std::shared_ptr<const FloatImage> equirect;  // linear RGB, Equirect only
    std::string source;                          // file path for Equirect
    SkyParams sky;
    float rotation = 0;  // radians about +y
    float intensity_scale = 1;

    /// Radiance arriving from world direction `dir`, rotated and scaled, clamped to [0, kMaxRadiance].
    Vec3 radiance(Vec3 dir) const;
    /// Same, for a direction already in the environment's own (unrotated) frame.
    Vec3 local_radiance(Vec3 env_dir) const;
    Vec3 to_local(Vec3 world_dir) const;
    Vec3 to_world(Vec3 env_dir) const;
    void validate() const;
};

/// Constant radiance from every direction (furnace configurations).
EnvironmentSpec uniform_environment(Vec3 radiance, std::string id = "uniform");

EnvironmentSpec equirect_environment(FloatImage radiance_map, std::string id);

/// Loads a Radiance .hdr panorama; the id is the file stem.
EnvironmentSpec load_equirect(const std::filesystem::path& path);

/// Every .hdr file directly inside `dir`, sorted by name.
std::vector<EnvironmentSpec> load_environment_library(const std::filesystem::path& dir);

/// Random skies (day and night palettes, zero to three light blobs) with ids sky_000, sky_001, ...
std::vector<EnvironmentSpec> procedural_sky_library(std::uint64_t seed, int count);

/// Direction for equirect coordinates (u, v) in [0,1]^2, and its inverse.
Vec3 equirect_direction(float u, float v);
Vec2 equirect_coords(Vec3 dir);

}  // namespace matforge::render
