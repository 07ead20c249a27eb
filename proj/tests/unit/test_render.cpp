// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "../support/scenes.hpp"
#include "helpers.hpp"
#include "matforge/core/error.hpp"
#include "matforge/pbr/mixing.hpp"
#include "matforge/render/bsdf.hpp"
#include "matforge/render/bvh.hpp"
#include "matforge/render/env_sampler.hpp"
#include "matforge/render/renderer.hpp"

using namespace matforge;
using namespace matforge::render;

namespace {

constexpr double kPiD = 3.14159265358979323846;

// Smooth analytic environment used for the mirror oracle.
Vec3 analytic_sky(Vec3 d) {
    return {0.2f + 0.6f * (0.5f + 0.5f * d.x), 0.3f + 0.4f * (0.5f + 0.5f * d.y), 0.5f + 0.4f * (0.5f + 0.5f * d.z)};
}

EnvironmentSpec analytic_equirect(int w, int h) {
    FloatImage map(w, h, 3);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            map.set_rgb(x, y, analytic_sky(equirect_direction((x + 0.5f) / w, (y + 0.5f) / h)));
    return equirect_environment(std::move(map), "analytic");
}

// Double-precision Moller-Trumbore; returns t or -1 and the smallest barycentric margin.
double tri_hit(const double o[3], const double d[3], Vec3 a, Vec3 b, Vec3 c, double& margin) {
    double e1[3] = {b.x - a.x, b.y - a.y, b.z - a.z}, e2[3] = {c.x - a.x, c.y - a.y, c.z - a.z};
    double p[3] = {d[1] * e2[2] - d[2] * e2[1], d[2] * e2[0] - d[0] * e2[2], d[0] * e2[1] - d[1] * e2[0]};
    double det = e1[0] * p[0] + e1[1] * p[1] + e1[2] * p[2];
    if (std::fabs(det) < 1e-18) return -1;
    double inv = 1 / det;
    double s[3] = {o[0] - a.x, o[1] - a.y, o[2] - a.z};
    double u = (s[0] * p[0] + s[1] * p[1] + s[2] * p[2]) * inv;
    double q[3] = {s[1] * e1[2] - s[2] * e1[1], s[2] * e1[0] - s[0] * e1[2], s[0] * e1[1] - s[1] * e1[0]};
    double v = (d[0] * q[0] + d[1] * q[1] + d[2] * q[2]) * inv;
    double t = (e2[0] * q[0] + e2[1] * q[1] + e2[2] * q[2]) * inv;
    margin = std::min({u, v, 1 - u - v});
    if (margin < 0 || t <= 1e-9) return -1;
    return t;
}

struct OracleHit {
    double t;
    ObjectRole role;
    double margin;
};

// Brute-force mask value for the centre of pixel (x, y); `ambiguous` flags near-edge decisions.
bool mask_oracle(const procgen::SceneSpec& s, int w, int h, int x, int y, bool& ambiguous) {
    const auto& cam = s.camera;
    double f[3] = {cam.look_at.x - cam.position.x, cam.look_at.y - cam.position.y, cam.look_at.z - cam.position.z};
    double fl = std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]);
    for (double& v : f) v /= fl;
    double up[3] = {0, 1, 0};
    if (std::fabs(f[1]) > 0.999) up[1] = 0, up[2] = 1;
    double r[3] = {f[1] * up[2] - f[2] * up[1], f[2] * up[0] - f[0] * up[2], f[0] * up[1] - f[1] * up[0]};
    double rl = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    for (double& v : r) v /= rl;
    double u[3] = {r[1] * f[2] - r[2] * f[1], r[2] * f[0] - r[0] * f[2], r[0] * f[1] - r[1] * f[0]};
    double th = std::tan(0.5 * cam.vfov_deg * kPiD / 180.0);
    double px = (2.0 * (x + 0.5) / w - 1.0) * th * w / h, py = (1.0 - 2.0 * (y + 0.5) / h) * th;
    double d[3] = {f[0] + r[0] * px + u[0] * py, f[1] + r[1] * px + u[1] * py, f[2] + r[2] * px + u[2] * py};
    double o[3] = {cam.position.x, cam.position.y, cam.position.z};

    std::vector<OracleHit> hits;
    auto scan = [&](const procgen::Mesh& m, ObjectRole role) {
        for (const auto& t : m.triangles) {
            double margin;
            double th = tri_hit(o, d, m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]], margin);
            if (th > 0) hits.push_back({th, role, margin});
        }
    };
    scan(s.main_object, ObjectRole::Main);
    if (s.vessel) scan(s.vessel->mesh, ObjectRole::VesselGlass);
    scan(s.ground.mesh, ObjectRole::Ground);
    for (const auto& b : s.background_objects) scan(b.mesh, ObjectRole::Background);
    std::sort(hits.begin(), hits.end(), [](const OracleHit& a, const OracleHit& b) { return a.t < b.t; });

    ambiguous = false;
    int glass = 0;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        if (hits[i].margin < 1e-4) ambiguous = true;
        if (i + 1 < hits.size() && hits[i + 1].t - hits[i].t < 1e-5 && hits[i + 1].role != hits[i].role) ambiguous = true;
        if (hits[i].role == ObjectRole::VesselGlass) {
            if (++glass > 4) return false;
            continue;
        }
        return hits[i].role == ObjectRole::Main;
    }
    return false;
}

procgen::GenerationConfig desk_config() {
    procgen::GenerationConfig c;
    c.textured_probability = 0;
    c.environment_library = procedural_sky_library(derive_seed(9, "env"), 8);
    return c;
}

}  // namespace

TEST_SUITE("render") {
    TEST_CASE("bvh agrees with brute force") {
        Rng rng(5);
        std::vector<Vec3> a, b, c;
        for (int i = 0; i < 300; ++i) {
            Vec3 base{rng.uniform() * 4 - 2, rng.uniform() * 4 - 2, rng.uniform() * 4 - 2};
            auto jitter = [&] { return Vec3{rng.uniform() - 0.5f, rng.uniform() - 0.5f, rng.uniform() - 0.5f} * 0.6f; };
            a.push_back(base + jitter());
            b.push_back(base + jitter());
            c.push_back(base + jitter());
        }
        Bvh bvh(a, b, c);
        int hits = 0;
        for (int i = 0; i < 2000; ++i) {
            Ray ray{{rng.uniform() * 6 - 3, rng.uniform() * 6 - 3, -5},
                    normalize(Vec3{rng.uniform() - 0.5f, rng.uniform() - 0.5f, 1.0f}), 1e30f};
            float best = 1e30f;
            for (std::size_t k = 0; k < a.size(); ++k) {
                float b1, b2;
                float t = intersect_triangle(ray, a[k], b[k], c[k], b1, b2);
                if (t > 0 && t < best) best = t;
            }
            Hit h;
            bool got = bvh.intersect(ray, h);
            REQUIRE(got == (best < 1e30f));
            if (got) {
                ++hits;
                REQUIRE(h.t == doctest::Approx(best).epsilon(1e-6));
                REQUIRE(bvh.occluded(ray));
            }
        }
        CHECK(hits > 100);
    }

    TEST_CASE("fresnel and ggx basics") {
        CHECK(fresnel_dielectric(1.0f, 1.5f) == doctest::Approx(0.04f).epsilon(1e-4));
        CHECK(fresnel_dielectric(0.1f, 1.0f / 1.5f) == doctest::Approx(1.0f));  // total internal reflection
        CHECK(fresnel_schlick(0.0f, 0.3f) == 0.0f);
        CHECK(fresnel_schlick(1.0f, 0.3f) == doctest::Approx(1.0f));
        // Projected microfacet area integrates to one over the hemisphere.
        for (float alpha : {0.1f, 0.4f, 0.9f}) {
            double sum = 0;
            const int n = 400;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double ct = (i + 0.5) / n, phi = 2 * kPiD * (j + 0.5) / n, st = std::sqrt(1 - ct * ct);
                    Vec3 h{static_cast<float>(st * std::cos(phi)), static_cast<float>(st * std::sin(phi)), static_cast<float>(ct)};
                    sum += ggx_d(h, alpha) * ct * (1.0 / n) * (2 * kPiD / n);
                }
            CHECK(sum == doctest::Approx(1.0).epsilon(0.02));
        }
    }

    TEST_CASE("bsdf sampling is consistent with eval and pdf") {
        Rng rng(3);
        for (auto [rough, metal, trans] : {std::tuple{0.3f, 0.0f, 0.0f}, std::tuple{0.6f, 1.0f, 0.0f}, std::tuple{0.5f, 0.4f, 0.0f}}) {
            pbr::ShadingParams p;
            p.base_color = {0.8f, 0.6f, 0.4f};
            p.roughness = rough;
            p.metallic = metal;
            p.transmission = trans;
            Bsdf bsdf(p, 1.5f);
            Vec3 wo = normalize(Vec3{0.3f, -0.2f, 0.9f});
            Vec3 mean{0, 0, 0};
            const int n = 20000;
            for (int i = 0; i < n; ++i) {
                auto s = bsdf.sample(wo, rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform());
                if (!s) continue;
                mean = mean + s->weight * (1.0f / n);
                if (!s->delta && s->pdf > 1e-3f) {
                    REQUIRE(bsdf.pdf(wo, s->wi) == doctest::Approx(s->pdf).epsilon(1e-3));
                    Vec3 f = bsdf.eval(wo, s->wi);
                    REQUIRE(f.x / s->pdf == doctest::Approx(s->weight.x).epsilon(1e-3));
                }
            }
            // Directional albedo never exceeds one.
            CHECK(mean.x <= 1.02f);
            CHECK(mean.y <= 1.02f);
            CHECK(mean.z <= 1.02f);
        }
    }

    TEST_CASE("absorption coefficient gives the base colour over 5 cm") {
        Vec3 s = absorption_coefficient({0.5f, 1.0f, 0.0f});
        CHECK(std::exp(-s.x * 0.05f) == doctest::Approx(0.5f).epsilon(1e-5));
        CHECK(s.y == doctest::Approx(0.0f));
        CHECK(std::exp(-s.z * 0.05f) == doctest::Approx(1e-3f).epsilon(1e-3));
    }

    TEST_CASE("environment clamps and rotates") {
        auto env = uniform_environment({1, 1, 1});
        env.intensity_scale = 1e5f;
        CHECK(env.radiance({0, 1, 0}).x == doctest::Approx(6550.0f));
        auto eq = analytic_equirect(256, 128);
        Vec3 d = normalize(Vec3{0.3f, 0.4f, -0.5f});
        CHECK(eq.radiance(d).x == doctest::Approx(analytic_sky(d).x).epsilon(0.01));
        eq.rotation = 1.0f;
        Vec3 local = eq.to_local(d);
        CHECK(eq.radiance(d).z == doctest::Approx(analytic_sky(local).z).epsilon(0.01));
        CHECK(length(eq.to_world(local) - d) < 1e-5f);
    }

    TEST_CASE("environment sampler density integrates to one") {
        auto sky = procedural_sky_library(4, 4)[1];
        EnvSampler sampler(sky);
        double sum = 0;
        const int n = 300;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 2 * n; ++j) {
                double ct = 1 - 2 * (i + 0.5) / n, phi = 2 * kPiD * (j + 0.5) / (2 * n), st = std::sqrt(1 - ct * ct);
                Vec3 w{static_cast<float>(st * std::cos(phi)), static_cast<float>(ct), static_cast<float>(st * std::sin(phi))};
                sum += sampler.pdf(w) * (2.0 / n) * (2 * kPiD / (2 * n));
            }
        CHECK(sum == doctest::Approx(1.0).epsilon(0.01));
        Rng rng(1);
        for (int i = 0; i < 200; ++i) {
            auto s = sampler.sample(rng.uniform(), rng.uniform());
            REQUIRE(length(s.dir) == doctest::Approx(1.0f).epsilon(1e-4));
            REQUIRE(sampler.pdf(s.dir) == doctest::Approx(s.pdf).epsilon(1e-2));
        }
    }

    TEST_CASE("black environment renders exact zeros") {
        auto scene = testing::single_object_scene(procgen::make_sphere(), uniform_environment({0, 0, 0}));
        RenderSettings rs;
        rs.width = rs.height = 24;
        rs.samples_per_pixel = 8;
        auto out = render::render(scene, 0, testing::diffuse(0.8f), rs);
        for (float v : out.image.data) REQUIRE(v == 0.0f);
        for (auto v : out.image_srgb.data) REQUIRE(v == 0);
        CHECK(out.mask.any());
    }

    TEST_CASE("furnace: diffuse sphere under unit environment") {
        auto scene = testing::single_object_scene(procgen::make_sphere(96, 48), uniform_environment({1, 1, 1}));
        for (bool nee : {true, false}) {
            RenderSettings rs;
            rs.width = rs.height = 48;
            rs.samples_per_pixel = 64;
            rs.env_sampling = nee;
            auto out = render::render(scene, 0, testing::diffuse(0.5f), rs);
            double mean = testing::masked_mean(out.image, testing::erode(out.mask, 1));
            CAPTURE(nee);
            CHECK(mean == doctest::Approx(0.5).epsilon(0.03));
            CHECK(out.stats.nan_samples == 0);
        }
    }

    TEST_CASE("mirror sphere reflects the environment") {
        auto scene = testing::single_object_scene(procgen::make_sphere(512, 256), analytic_equirect(512, 256), 3.0f, 20.0f);
        auto mirror = pbr::MaterialSpec::uniform("mirror", {1, 1, 1}, 0.0f, 1.0f, 0.0f, 1.5f);
        RenderSettings rs;
        rs.width = rs.height = 33;
        rs.samples_per_pixel = 64;
        auto out = render::render(scene, 0, mirror, rs);
        // Centre ray hits the sphere head-on and reflects straight back along +z.
        Vec3 want = analytic_sky({0, 0, 1});
        Vec3 got = out.image.rgb(16, 16);
        CHECK(got.x == doctest::Approx(want.x).epsilon(0.02));
        CHECK(got.y == doctest::Approx(want.y).epsilon(0.02));
        CHECK(got.z == doctest::Approx(want.z).epsilon(0.02));
    }

    TEST_CASE("rendering is deterministic and thread-count independent") {
        auto cfg = desk_config();
        auto set = procgen::generate_scene_set(21, cfg);
        RenderSettings rs;
        rs.width = rs.height = 32;
        rs.samples_per_pixel = 4;
        rs.seed = 77;
        rs.threads = 1;
        auto a = render::render(set.scenes[4], 2, set.material_b, rs);
        rs.threads = 3;
        auto b = render::render(set.scenes[4], 2, set.material_b, rs);
        CHECK(a.image == b.image);
        CHECK(a.image_srgb == b.image_srgb);
        CHECK(a.mask == b.mask);
        rs.seed = 78;
        auto c = render::render(set.scenes[4], 2, set.material_b, rs);
        CHECK_FALSE(c.image == a.image);
    }

    TEST_CASE("mask agrees with a brute-force ray oracle") {
        auto cfg = desk_config();
        bool seen_vessel = false, seen_plain = false;
        for (std::uint64_t seed = 0; seed < 40 && !(seen_vessel && seen_plain); ++seed) {
            auto set = procgen::generate_scene_set(seed, cfg);
            if (set.vessel ? seen_vessel : seen_plain) continue;
            (set.vessel ? seen_vessel : seen_plain) = true;
            for (int k : {0, 5}) {
                const auto& scene = set.scenes[k];
                const int w = 64, h = 64;
                Mask m = render_mask(PreparedScene(scene), w, h);
                REQUIRE(m.any());
                Rng rng(seed * 10 + k);
                int checked = 0, inside = 0, tries = 0;
                // Half the probes inside the mask so the main object is exercised.
                std::vector<std::pair<int, int>> on;
                for (int y = 0; y < h; ++y)
                    for (int x = 0; x < w; ++x)
                        if (m.at(x, y)) on.push_back({x, y});
                while (checked < 100 && tries < 1000) {
                    ++tries;
                    int x, y;
                    if (checked % 2 == 0) {
                        auto p = on[rng.below(static_cast<std::uint32_t>(on.size()))];
                        x = p.first;
                        y = p.second;
                    } else {
                        x = static_cast<int>(rng.below(w));
                        y = static_cast<int>(rng.below(h));
                    }
                    bool ambiguous;
                    bool want = mask_oracle(scene, w, h, x, y, ambiguous);
                    if (ambiguous) continue;
                    CAPTURE(seed);
                    CAPTURE(k);
                    CAPTURE(x);
                    CAPTURE(y);
                    REQUIRE(static_cast<bool>(m.at(x, y)) == want);
                    inside += want;
                    ++checked;
                }
                CHECK(checked == 100);
                CHECK(inside >= 40);
            }
        }
        CHECK(seen_vessel);
        CHECK(seen_plain);
    }

    TEST_CASE("render_set shapes, shared masks and the r=0 endpoint") {
        auto cfg = desk_config();
        auto set = procgen::generate_scene_set(33, cfg);
        RenderSettings rs;
        rs.width = rs.height = 16;
        rs.samples_per_pixel = 2;
        rs.seed = 5;
        int calls = 0;
        auto out = render_set(set, rs, [&](int, int) { ++calls; });
        CHECK(calls == 30);
        for (int k = 0; k < procgen::kScenesPerSet; ++k) {
            CHECK(out.masks[k].any());
            for (int i = 0; i < procgen::kImagesPerScene; ++i) {
                CHECK(out.images[k][i].mask == out.masks[k]);
                CHECK(out.images[k][i].image_srgb.width == 16);
            }
            RenderSettings direct = rs;
            direct.seed = scene_render_seed(rs.seed, k);
            CHECK(render::render(set.scenes[k], 0, set.material_a, direct).image_srgb == out.images[k][0].image_srgb);
            CHECK(render::render(set.scenes[k], 4, set.material_b, direct).image_srgb == out.images[k][4].image_srgb);
        }
    }

    TEST_CASE("settings validation") {
        RenderSettings rs;
        rs.samples_per_pixel = 0;
        CHECK_THROWS_AS(rs.validate(), InvalidArgument);
        rs = {};
        rs.max_bounces = 0;
        CHECK_THROWS_AS(rs.validate(), InvalidArgument);
    }
}
