// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/pbr/material_library.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "matforge/core/error.hpp"
#include "matforge/core/image_io.hpp"

namespace matforge::pbr {
namespace fs = std::filesystem;

namespace {

FloatImage to_single_channel(FloatImage img) {
    if (img.channels == 1) return img;
    FloatImage out(img.width, img.height, 1);
    for (std::size_t i = 0; i < out.pixel_count(); ++i) out.data[i] = img.data[i * img.channels];
    return out;
}

FloatImage to_rgb(FloatImage img) {
    if (img.channels == 3) return img;
    FloatImage out(img.width, img.height, 3);
    for (std::size_t i = 0; i < out.pixel_count(); ++i)
        out.data[3 * i] = out.data[3 * i + 1] = out.data[3 * i + 2] = img.data[i];
    return out;
}

FloatImage at_size(FloatImage img, int w, int h) {
    if (img.width == w && img.height == h) return img;
    FloatImage out = resample_bilinear(img, w, h);
    for (float& v : out.data) v = std::clamp(v, 0.0f, 1.0f);
    return out;
}

}  // namespace

MaterialSpec load_textured_material(const fs::path& dir) {
    const fs::path albedo_path = dir / "albedo.png";
    if (!fs::exists(albedo_path)) throw IoError("material directory lacks albedo.png: " + dir.string());

    FloatImage albedo = to_rgb(read_png(albedo_path));
    for (float& v : albedo.data) v = std::clamp(srgb_to_linear(v), 0.0f, 1.0f);
    const int w = albedo.width, h = albedo.height;

    MaterialSpec m;
    m.kind = MaterialKind::Textured;
    m.id = dir.filename().string();
    m.base_color = TextureMap::from_image(std::move(albedo));

    auto optional_scalar = [&](const char* name, ScalarChannel& slot) {
        fs::path p = dir / name;
        if (fs::exists(p)) slot = TextureMap::from_image(at_size(to_single_channel(read_png(p)), w, h));
    };
    optional_scalar("roughness.png", m.roughness);
    optional_scalar("metallic.png", m.metallic);
    optional_scalar("transmission.png", m.transmission);
    if (fs::path p = dir / "normal.png"; fs::exists(p)) m.normal = TextureMap::normal_map(at_size(to_rgb(read_png(p)), w, h));

    if (fs::path p = dir / "material.json"; fs::exists(p)) {
        std::ifstream in(p);
        try {
            auto j = nlohmann::json::parse(in);
            if (j.contains("ior")) m.ior = j.at("ior").get<float>();
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(p.string() + ": " + e.what());
        }
    }
    m.validate();
    return m;
}

std::vector<MaterialSpec> load_material_library(const fs::path& root) {
    if (!fs::is_directory(root)) throw IoError("material library is not a directory: " + root.string());
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory() && fs::exists(entry.path() / "albedo.png")) dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    std::vector<MaterialSpec> out;
    out.reserve(dirs.size());
    for (const auto& d : dirs) out.push_back(load_textured_material(d));
    return out;
}

}  // namespace matforge::pbr
