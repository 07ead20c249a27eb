// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "matforge/render/environment.hpp"

namespace matforge::render {

/// Piecewise-constant importance distribution over an environment, built from its
/// luminance on a lat-long grid. A small floor keeps every direction reachable.
class EnvSampler {
public:
    explicit EnvSampler(const EnvironmentSpec& env, int width = 256, int height = 128);

    struct Sample {
        Vec3 dir;  // world frame
        float pdf = 0;  // per steradian
    };
    Sample sample(float u1, float u2) const;
    float pdf(Vec3 world_dir) const;

private:
    const EnvironmentSpec* env_;
    int w_, h_;
    std::vector<float> weights_;      // h * w, sin-weighted
    std::vector<float> row_cdf_;      // h + 1
    std::vector<float> col_cdf_;      // h * (w + 1)
    float total_ = 0;
};

}  // namespace matforge::render
