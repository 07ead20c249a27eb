// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include "matforge/pbr/material.hpp"

namespace matforge::pbr {

/// Loads one textured material from a directory holding `albedo.png` (required, sRGB)
/// and optionally `roughness.png`, `metallic.png`, `transmission.png`, `normal.png`
/// (linear) plus `material.json` with an "ior" field. Missing maps fall back to
/// roughness 0.5, metallic 0, transmission 0 and a flat normal. Maps are resampled to
/// the albedo size. The material id is the directory name.
MaterialSpec load_textured_material(const std::filesystem::path& dir);

/// Every subdirectory of `root` that contains an albedo map, sorted by name.
std::vector<MaterialSpec> load_material_library(const std::filesystem::path& root);

}  // namespace matforge::pbr
