// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

// Hand-built scenes and oracles shared by the unit and acceptance suites.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "matforge/core/image.hpp"
#include "matforge/procgen/primitives.hpp"
#include "matforge/procgen/scene.hpp"
#include "matforge/render/environment.hpp"

namespace testing {

/// One object under a single environment, no ground, camera on +z looking at the origin.
inline matforge::procgen::SceneSpec single_object_scene(matforge::procgen::Mesh mesh,
                                                        const matforge::render::EnvironmentSpec& env,
                                                        float distance = 3.0f, float vfov_deg = 45.0f) {
    using namespace matforge;
    procgen::SceneSpec s;
    s.policy = procgen::BackgroundPolicy::Fixed;
    s.main_placement.shape = "test";
    s.main_object = std::move(mesh);
    s.camera.position = {0, 0, distance};
    s.camera.look_at = {0, 0, 0};
    s.camera.vfov_deg = vfov_deg;
    s.lighting.fill(env);
    s.ground.material = pbr::MaterialSpec::uniform("ground", {0.5f, 0.5f, 0.5f}, 0.5f, 0, 0, 1.5f);
    return s;
}

inline matforge::pbr::MaterialSpec diffuse(float albedo) {
    // ior 1 removes the specular coat, leaving a pure Lambertian surface.
    return matforge::pbr::MaterialSpec::uniform("diffuse", {albedo, albedo, albedo}, 1.0f, 0.0f, 0.0f, 1.0f);
}

/// Mask shrunk by `r` pixels (4-neighbourhood), dropping silhouette pixels that mix in background.
inline matforge::Mask erode(const matforge::Mask& m, int r) {
    matforge::Mask cur = m;
    for (int it = 0; it < r; ++it) {
        matforge::Mask next(cur.width, cur.height);
        for (int y = 1; y + 1 < cur.height; ++y)
            for (int x = 1; x + 1 < cur.width; ++x)
                next.at(x, y) = cur.at(x, y) && cur.at(x - 1, y) && cur.at(x + 1, y) && cur.at(x, y - 1) && cur.at(x, y + 1);
        cur = std::move(next);
    }
    return cur;
}

/// Mean of channel c (or all three when c < 0) over mask pixels.
inline double masked_mean(const matforge::FloatImage& img, const matforge::Mask& m, int c = -1) {
    double sum = 0;
    std::size_t n = 0;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            if (!m.at(x, y)) continue;
            if (c < 0) sum += (img.at(x, y, 0) + img.at(x, y, 1) + img.at(x, y, 2)) / 3.0;
            else sum += img.at(x, y, c);
            ++n;
        }
    return n ? sum / static_cast<double>(n) : 0.0;
}

/// Spearman rank correlation; average ranks for ties.
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size();) {
            std::size_t j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
            i = j + 1;
        }
        return r;
    };
    auto ra = ranks(a), rb = ranks(b);
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= static_cast<double>(ra.size());
    mb /= static_cast<double>(rb.size());
    double num = 0, da = 0, db = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        num += (ra[i] - ma) * (rb[i] - mb);
        da += (ra[i] - ma) * (ra[i] - ma);
        db += (rb[i] - mb) * (rb[i] - mb);
    }
    return da > 0 && db > 0 ? num / std::sqrt(da * db) : 0.0;
}

}  // namespace testing
