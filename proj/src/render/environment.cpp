// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/render/environment.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "matforge/core/error.hpp"
#include "matforge/core/image_io.hpp"
#include "matforge/core/rng.hpp"

namespace matforge::render {

Vec3 equirect_direction(float u, float v) {
    float phi = (u - 0.5f) * kTwoPi;
    float theta = v * kPi;
    float st = std::sin(theta);
    return {st * std::sin(phi), std::cos(theta), -st * std::cos(phi)};
}

Vec2 equirect_coords(Vec3 d) {
    float u = std::atan2(d.x, -d.z) / kTwoPi + 0.5f;
    float v = std::acos(std::clamp(d.y, -1.0f, 1.0f)) / kPi;
    if (u >= 1.0f) u -= 1.0f;
    return {u, v};
}

namespace {

Vec3 sample_equirect(const FloatImage& img, Vec3 dir) {
    Vec2 uv = equirect_coords(dir);
    float fx = uv.x * img.width - 0.5f, fy = uv.y * img.height - 0.5f;
    int x0 = static_cast<int>(std::floor(fx)), y0 = static_cast<int>(std::floor(fy));
    float tx = fx - x0, ty = fy - y0;
    auto wrap_x = [&](int x) { return ((x % img.width) + img.width) % img.width; };
    auto clamp_y = [&](int y) { return std::clamp(y, 0, img.height - 1); };
    Vec3 a = img.rgb(wrap_x(x0), clamp_y(y0)), b = img.rgb(wrap_x(x0 + 1), clamp_y(y0));
    Vec3 c = img.rgb(wrap_x(x0), clamp_y(y0 + 1)), d = img.rgb(wrap_x(x0 + 1), clamp_y(y0 + 1));
    return lerp(lerp(a, b, tx), lerp(c, d, tx), ty);
}

Vec3 sky_radiance(const SkyParams& sky, Vec3 d) {
    Vec3 base;
    if (d.y >= 0) {
        float t = std::sqrt(d.y);
        base = lerp(sky.horizon, sky.zenith, t);
    } else {
        // short blend below the horizon avoids a hard seam on the ground plane's far edge
        float t = std::min(1.0f, -d.y * 8.0f);
        base = lerp(sky.horizon, sky.ground, t);
    }
    for (const auto& blob : sky.blobs) {
        float c = dot(d, blob.direction);
        if (c >= std::cos(blob.angular_radius)) base += blob.radiance;
    }
    return base;
}

Vec3 clamp_radiance(Vec3 v) {
    auto f = [](float x) { return std::isfinite(x) ? std::clamp(x, 0.0f, kMaxRadiance) : 0.0f; };
    return {f(v.x), f(v.y), f(v.z)};
}

}  // namespace

Vec3 EnvironmentSpec::to_local(Vec3 w) const {
    float c = std::cos(rotation), s = std::sin(rotation);
    return {c * w.x + s * w.z, w.y, -s * w.x + c * w.z};
}

Vec3 EnvironmentSpec::to_world(Vec3 e) const {
    float c = std::cos(rotation), s = std::sin(rotation);
    return {c * e.x - s * e.z, e.y, s * e.x + c * e.z};
}

Vec3 EnvironmentSpec::local_radiance(Vec3 d) const {
    Vec3 L = kind == EnvironmentKind::Equirect ? sample_equirect(*equirect, d) : sky_radiance(sky, d);
    return clamp_radiance(L * intensity_scale);
}

Vec3 EnvironmentSpec::radiance(Vec3 dir) const { return local_radiance(to_local(dir)); }

void EnvironmentSpec::validate() const {
    if (!(intensity_scale > 0) || !std::isfinite(intensity_scale))
        throw ValidationError(fmt::format("environment {}: intensity_scale must be positive", id));
    if (!std::isfinite(rotation)) throw ValidationError(fmt::format("environment {}: rotation not finite", id));
    if (kind == EnvironmentKind::Equirect) {
        if (!equirect || equirect->empty() || equirect->channels != 3)
            throw ValidationError(fmt::format("environment {}: missing RGB radiance map", id));
        for (float v : equirect->data)
            if (!(v >= 0) || !std::isfinite(v))
                throw ValidationError(fmt::format("environment {}: negative or non-finite radiance", id));
    } else {
        for (const auto& b : sky.blobs)
            if (!(b.angular_radius > 0) || std::fabs(length(b.direction) - 1.0f) > 1e-3f)
                throw ValidationError(fmt::format("environment {}: bad light blob", id));
    }
}

EnvironmentSpec uniform_environment(Vec3 radiance, std::string id) {
    EnvironmentSpec e;
    e.id = std::move(id);
    e.kind = EnvironmentKind::ProceduralSky;
    e.sky.zenith = e.sky.horizon = e.sky.ground = radiance;
    return e;
}

EnvironmentSpec equirect_environment(FloatImage radiance_map, std::string id) {
    if (radiance_map.channels != 3 || radiance_map.empty())
        throw InvalidArgument("equirect environment needs a non-empty RGB map");
    EnvironmentSpec e;
    e.id = std::move(id);
    e.kind = EnvironmentKind::Equirect;
    e.equirect = std::make_shared<const FloatImage>(std::move(radiance_map));
    return e;
}

EnvironmentSpec load_equirect(const std::filesystem::path& path) {
    EnvironmentSpec e = equirect_environment(read_hdr(path), path.stem().string());
    e.source = path.string();
    return e;
}

std::vector<EnvironmentSpec> load_environment_library(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw IoError("environment library not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".hdr") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<EnvironmentSpec> out;
    for (const auto& f : files) out.push_back(load_equirect(f));
    if (out.empty()) throw EmptyLibraryError("no .hdr files in " + dir.string());
    return out;
}

std::vector<EnvironmentSpec> procedural_sky_library(std::uint64_t seed, int count) {
    if (count < 1) throw InvalidArgument("procedural sky library needs count >= 1");
    std::vector<EnvironmentSpec> out;
    for (int i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        auto jitter = [&](Vec3 c, float amount) {
            return Vec3{c.x * (1.0f + amount * (2 * rng.uniform() - 1)), c.y * (1.0f + amount * (2 * rng.uniform() - 1)),
                        c.z * (1.0f + amount * (2 * rng.uniform() - 1))};
        };
        EnvironmentSpec e;
        e.id = fmt::format("sky_{:03d}", i);
        e.kind = EnvironmentKind::ProceduralSky;
        bool night = rng.bernoulli(0.25);
        if (night) {
            e.sky.zenith = jitter({0.02f, 0.03f, 0.08f}, 0.5f);
            e.sky.horizon = jitter({0.08f, 0.07f, 0.1f}, 0.5f);
            e.sky.ground = jitter({0.03f, 0.03f, 0.03f}, 0.5f);
        } else {
            e.sky.zenith = jitter({0.25f, 0.4f, 0.8f}, 0.4f);
            e.sky.horizon = jitter({0.8f, 0.8f, 0.85f}, 0.3f);
            e.sky.ground = jitter({0.3f, 0.27f, 0.22f}, 0.4f);
        }
        int blobs = static_cast<int>(rng.below(4));
        for (int b = 0; b < blobs; ++b) {
            LightBlob blob;
            float az = rng.uniform() * kTwoPi;
            float el = static_cast<float>(rng.uniform(0.1, 1.4));
            blob.direction = normalize(Vec3{std::cos(el) * std::sin(az), std::sin(el), -std::cos(el) * std::cos(az)});
            blob.angular_radius = static_cast<float>(rng.uniform(0.05, 0.25));
            float power = static_cast<float>(rng.uniform(2.0, night ? 8.0 : 20.0));
            blob.radiance = jitter({power, power * 0.95f, power * 0.85f}, 0.15f);
            e.sky.blobs.push_back(blob);
        }
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace matforge::render
