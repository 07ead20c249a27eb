// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/render/env_sampler.hpp"

#include <algorithm>
#include <cmath>

#include "matforge/core/error.hpp"

namespace matforge::render {

EnvSampler::EnvSampler(const EnvironmentSpec& env, int width, int height) : env_(&env), w_(width), h_(height) {
    if (width < 1 || height < 1) throw InvalidArgument("env sampler: grid must be non-empty");
    std::vector<float> lum(static_cast<std::size_t>(w_) * h_);
    double mean = 0;
    for (int j = 0; j < h_; ++j)
        for (int i = 0; i < w_; ++i) {
            Vec3 d = equirect_direction((i + 0.5f) / w_, (j + 0.5f) / h_);
            float l = std::max(0.0f, luminance(env.local_radiance(d)));
            lum[static_cast<std::size_t>(j) * w_ + i] = l;
            mean += l;
        }
    mean /= static_cast<double>(lum.size());
    const float floor = static_cast<float>(0.01 * mean) + 1e-6f;

    weights_.resize(lum.size());
    row_cdf_.assign(static_cast<std::size_t>(h_) + 1, 0.0f);
    col_cdf_.assign(static_cast<std::size_t>(h_) * (w_ + 1), 0.0f);
    double acc_rows = 0;
    for (int j = 0; j < h_; ++j) {
        float st = std::sin(kPi * (j + 0.5f) / h_);
        double acc = 0;
        float* cdf = &col_cdf_[static_cast<std::size_t>(j) * (w_ + 1)];
        for (int i = 0; i < w_; ++i) {
            float w = (lum[static_cast<std::size_t>(j) * w_ + i] + floor) * st;
            weights_[static_cast<std::size_t>(j) * w_ + i] = w;
            acc += w;
            cdf[i + 1] = static_cast<float>(acc);
        }
        acc_rows += acc;
        row_cdf_[static_cast<std::size_t>(j) + 1] = static_cast<float>(acc_rows);
    }
    total_ = static_cast<float>(acc_rows);
}

namespace {
// Index k with cdf[k] <= x < cdf[k+1]; returns the fractional position inside the bucket.
int find_bucket(const float* cdf, int n, float x, float& frac) {
    const float* it = std::upper_bound(cdf + 1, cdf + n + 1, x);
    int k = std::clamp(static_cast<int>(it - cdf) - 1, 0, n - 1);
    float lo = cdf[k], hi = cdf[k + 1];
    frac = hi > lo ? std::clamp((x - lo) / (hi - lo), 0.0f, 0.99999994f) : 0.5f;
    return k;
}
}  // namespace

EnvSampler::Sample EnvSampler::sample(float u1, float u2) const {
    float fy, fx;
    int j = find_bucket(row_cdf_.data(), h_, u1 * total_, fy);
    const float* cdf = &col_cdf_[static_cast<std::size_t>(j) * (w_ + 1)];
    int i = find_bucket(cdf, w_, u2 * cdf[w_], fx);
    float u = (i + fx) / w_, v = (j + fy) / h_;
    Vec3 local = equirect_direction(u, v);
    float st = std::sin(kPi * v);
    Sample s;
    s.dir = env_->to_world(local);
    if (st <= 0) return s;
    float pdf_uv = weights_[static_cast<std::size_t>(j) * w_ + i] / total_ * static_cast<float>(w_ * h_);
    s.pdf = pdf_uv / (2.0f * kPi * kPi * st);
    return s;
}

float EnvSampler::pdf(Vec3 world_dir) const {
    Vec2 uv = equirect_coords(env_->to_local(world_dir));
    float st = std::sin(kPi * uv.y);
    if (st <= 0) return 0;
    int i = std::clamp(static_cast<int>(uv.x * w_), 0, w_ - 1);
    int j = std::clamp(static_cast<int>(uv.y * h_), 0, h_ - 1);
    float pdf_uv = weights_[static_cast<std::size_t>(j) * w_ + i] / total_ * static_cast<float>(w_ * h_);
    return pdf_uv / (2.0f * kPi * kPi * st);
}

}  // namespace matforge::render
