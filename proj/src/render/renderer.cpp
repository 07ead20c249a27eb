// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/render/renderer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <optional>

#include <fmt/format.h>

#include "matforge/core/error.hpp"
#include "matforge/core/image_io.hpp"
#include "matforge/core/parallel.hpp"
#include "matforge/core/rng.hpp"
#include "matforge/pbr/mixing.hpp"
#include "matforge/render/bsdf.hpp"
#include "matforge/render/env_sampler.hpp"

namespace matforge::render {

void RenderSettings::validate() const {
    if (width < 1 || height < 1) throw InvalidArgument("render: image size must be positive");
    if (samples_per_pixel < 1) throw InvalidArgument("render: samples_per_pixel must be >= 1");
    if (max_bounces < 1) throw InvalidArgument("render: max_bounces must be >= 1");
    if (!(exposure > 0)) throw InvalidArgument("render: exposure must be positive");
}

std::uint8_t tonemap_channel(float v, float exposure) {
    float x = v * exposure;
    x = x > 0.0f ? (x < 1.0f ? x : 1.0f) : 0.0f;  // NaN maps to 0
    return static_cast<std::uint8_t>(std::lround(255.0f * linear_to_srgb(x)));
}

Image8 tonemap(const FloatImage& linear, float exposure) {
    Image8 out(linear.width, linear.height, linear.channels);
    for (std::size_t i = 0; i < linear.data.size(); ++i) out.data[i] = tonemap_channel(linear.data[i], exposure);
    return out;
}

PreparedScene::PreparedScene(const procgen::SceneSpec& scene) : scene_(&scene) {
    add(scene.main_object, {ObjectRole::Main, nullptr, nullptr});
    if (scene.vessel) add(scene.vessel->mesh, {ObjectRole::VesselGlass, &scene.vessel->glass, nullptr});
    add(scene.ground.mesh, {ObjectRole::Ground, &scene.ground.material, &scene.ground.uv});
    for (const auto& b : scene.background_objects) add(b.mesh, {ObjectRole::Background, &b.material, &b.uv});
    bvh_ = Bvh(p0_, p1_, p2_);
}

void PreparedScene::add(const procgen::Mesh& mesh, Object obj) {
    if (mesh.triangles.empty()) return;
    const auto id = static_cast<std::uint32_t>(objects_.size());
    objects_.push_back(obj);
    const bool has_uv = mesh.uv.size() == mesh.vertices.size();
    const bool has_n = mesh.normals.size() == mesh.vertices.size();
    for (const auto& t : mesh.triangles) {
        Vec3 a = mesh.vertices[t[0]], b = mesh.vertices[t[1]], c = mesh.vertices[t[2]];
        Vec3 ng = cross(b - a, c - a);
        if (!(dot(ng, ng) > 0)) continue;  // degenerate
        ng = normalize(ng);
        p0_.push_back(a);
        p1_.push_back(b);
        p2_.push_back(c);
        tri_object_.push_back(id);
        normals_.push_back(has_n ? std::array<Vec3, 3>{mesh.normals[t[0]], mesh.normals[t[1]], mesh.normals[t[2]]}
                                 : std::array<Vec3, 3>{ng, ng, ng});
        std::array<Vec2, 3> uv = has_uv ? std::array<Vec2, 3>{mesh.uv[t[0]], mesh.uv[t[1]], mesh.uv[t[2]]}
                                        : std::array<Vec2, 3>{};
        uvs_.push_back(uv);
        // dp/du from the uv parameterization, or any tangent when uvs are degenerate
        float du1 = uv[1].x - uv[0].x, dv1 = uv[1].y - uv[0].y;
        float du2 = uv[2].x - uv[0].x, dv2 = uv[2].y - uv[0].y;
        float det = du1 * dv2 - du2 * dv1;
        Vec3 tangent = Frame::from_normal(ng).t;
        if (std::fabs(det) > 1e-12f) {
            Vec3 tg = ((b - a) * dv2 - (c - a) * dv1) / det;
            if (dot(tg, tg) > 0 && is_finite(tg)) tangent = normalize(tg);
        }
        tangents_.push_back(tangent);
    }
}

PreparedScene::SurfacePoint PreparedScene::surface(const Ray& ray, const Hit& hit) const {
    const std::uint32_t t = hit.prim;
    const float b0 = 1.0f - hit.b1 - hit.b2;
    SurfacePoint sp;
    sp.p = ray.origin + ray.dir * hit.t;
    sp.ng = normalize(cross(p1_[t] - p0_[t], p2_[t] - p0_[t]));
    const auto& n = normals_[t];
    sp.ns = normalize(n[0] * b0 + n[1] * hit.b1 + n[2] * hit.b2);
    if (!is_finite(sp.ns)) sp.ns = sp.ng;
    const auto& uv = uvs_[t];
    sp.uv = {uv[0].x * b0 + uv[1].x * hit.b1 + uv[2].x * hit.b2, uv[0].y * b0 + uv[1].y * hit.b1 + uv[2].y * hit.b2};
    sp.tangent = tangents_[t];
    return sp;
}

namespace {

struct CameraModel {
    Vec3 origin, forward, right, up;
    float tan_half, aspect;

    CameraModel(const procgen::Camera& cam, int width, int height) {
        origin = cam.position;
        forward = normalize(cam.look_at - cam.position);
        Vec3 world_up{0, 1, 0};
        if (std::fabs(dot(forward, world_up)) > 0.999f) world_up = {0, 0, 1};
        right = normalize(cross(forward, world_up));
        up = cross(right, forward);
        tan_half = std::tan(0.5f * cam.vfov_deg * kPi / 180.0f);
        aspect = static_cast<float>(width) / static_cast<float>(height);
    }

    /// (sx, sy) in pixel units, y down.
    Ray ray(float sx, float sy, int width, int height) const {
        float x = (2.0f * sx / width - 1.0f) * tan_half * aspect;
        float y = (1.0f - 2.0f * sy / height) * tan_half;
        return {origin, normalize(forward + right * x + up * y), 1e30f};
    }
};

float ray_epsilon(Vec3 p) { return 1e-5f * (1.0f + std::max({std::fabs(p.x), std::fabs(p.y), std::fabs(p.z)})); }

float power_heuristic(float a, float b) {
    float a2 = a * a, b2 = b * b;
    return a2 + b2 > 0 ? a2 / (a2 + b2) : 0.0f;
}

struct Tracer {
    const PreparedScene& scene;
    const pbr::MaterialSpec& main_material;
    const procgen::UvTransform& main_uv;
    const EnvironmentSpec& env;
    const EnvSampler* sampler;
    int max_bounces;

    Vec3 trace(Ray ray, Rng& rng) const {
        Vec3 L{}, beta{1, 1, 1}, sigma{};
        bool specular = true;
        float prev_pdf = 0;
        for (int depth = 0;; ++depth) {
            Hit hit;
            if (!scene.bvh().intersect(ray, hit)) {
                Vec3 Le = env.radiance(ray.dir);
                float w = 1.0f;
                if (sampler && !specular) w = power_heuristic(prev_pdf, sampler->pdf(ray.dir));
                L += beta * Le * w;
                break;
            }
            if (sigma.x > 0 || sigma.y > 0 || sigma.z > 0)
                beta *= Vec3{std::exp(-sigma.x * hit.t), std::exp(-sigma.y * hit.t), std::exp(-sigma.z * hit.t)};
            if (depth >= max_bounces) break;

            auto sp = scene.surface(ray, hit);
            const auto& obj = scene.object_of(hit.prim);
            const bool front = dot(ray.dir, sp.ng) < 0;
            if (!front) {
                sp.ng = -sp.ng;
                sp.ns = -sp.ns;
            }
            if (dot(sp.ns, sp.ng) <= 0) sp.ns = sp.ng;

            const pbr::MaterialSpec& mat = obj.material ? *obj.material : main_material;
            const procgen::UvTransform& uvx = obj.uv ? *obj.uv : main_uv;
            pbr::ShadingParams params = mat.evaluate(uvx.apply(sp.uv));
            if (params.tangent_normal) {
                Vec3 t = sp.tangent - sp.ns * dot(sp.tangent, sp.ns);
                if (dot(t, t) > 1e-12f) {
                    t = normalize(t);
                    Vec3 b = cross(sp.ns, t);
                    Vec3 tn = *params.tangent_normal;
                    Vec3 n = normalize(t * tn.x + b * tn.y + sp.ns * tn.z);
                    if (dot(n, sp.ng) > 0 && is_finite(n)) sp.ns = n;
                }
            }

            Frame frame = Frame::from_normal(sp.ns);
            Vec3 wo = frame.to_local(-ray.dir);
            if (wo.z <= 1e-6f) {
                frame = Frame::from_normal(sp.ng);
                wo = frame.to_local(-ray.dir);
            }
            const float eta = front ? params.ior : 1.0f / params.ior;
            Bsdf bsdf(params, eta);
            const float eps = ray_epsilon(sp.p);

            if (sampler && bsdf.has_non_delta()) {
                float u1 = rng.uniform(), u2 = rng.uniform();
                auto ls = sampler->sample(u1, u2);
                if (ls.pdf > 0 && dot(ls.dir, sp.ng) > 0) {
                    Vec3 wi = frame.to_local(ls.dir);
                    Vec3 f = bsdf.eval(wo, wi);
                    if (max_component(f) > 0) {
                        Ray shadow{sp.p + sp.ng * eps, ls.dir, 1e30f};
                        if (!scene.bvh().occluded(shadow)) {
                            float w = power_heuristic(ls.pdf, bsdf.pdf(wo, wi));
                            L += beta * f * env.radiance(ls.dir) * (w / ls.pdf);
                        }
                    }
                }
            }

            float ul = rng.uniform(), u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
            auto s = bsdf.sample(wo, ul, u1, u2, u3);
            if (!s) break;
            Vec3 wi = frame.to_world(s->wi);
            float side = dot(wi, sp.ng);
            if (s->transmitted ? side >= 0 : side <= 0) break;
            beta *= s->weight;
            if (s->transmitted) sigma = front ? absorption_coefficient(params.base_color) : Vec3{};
            specular = s->delta;
            prev_pdf = s->pdf;
            ray = {sp.p + sp.ng * (s->transmitted ? -eps : eps), wi, 1e30f};

            if (depth >= 3) {
                float q = std::min(0.95f, max_component(beta));
                if (!(q > 0) || rng.uniform() >= q) break;
                beta = beta / q;
            }
        }
        return L;
    }
};

constexpr int kTile = 16;
constexpr int kMaxGlassInterfaces = 4;

}  // namespace

Mask render_mask(const PreparedScene& scene, int width, int height) {
    CameraModel cam(scene.spec().camera, width, height);
    Mask mask(width, height);
    parallel_for(static_cast<std::size_t>(height), [&](std::size_t row) {
        const int y = static_cast<int>(row);
        for (int x = 0; x < width; ++x) {
            Ray ray = cam.ray(x + 0.5f, y + 0.5f, width, height);
            for (int crossed = 0; crossed <= kMaxGlassInterfaces; ++crossed) {
                Hit hit;
                if (!scene.bvh().intersect(ray, hit)) break;
                ObjectRole role = scene.object_of(hit.prim).role;
                if (role == ObjectRole::VesselGlass) {
                    Vec3 p = ray.origin + ray.dir * hit.t;
                    ray.origin = p + ray.dir * ray_epsilon(p);
                    continue;
                }
                mask.at(x, y) = role == ObjectRole::Main ? 1 : 0;
                break;
            }
        }
    });
    return mask;
}

RenderOutput render(const PreparedScene& scene, int image_index, const pbr::MaterialSpec& material,
                    const RenderSettings& settings) {
    settings.validate();
    if (image_index < 0 || image_index >= procgen::kImagesPerScene)
        throw InvalidArgument(fmt::format("render: image index {} outside [0, {})", image_index, procgen::kImagesPerScene));
    const auto start = std::chrono::steady_clock::now();
    const auto& spec = scene.spec();
    const auto idx = static_cast<std::size_t>(image_index);
    const EnvironmentSpec& env = spec.lighting[idx];
    std::optional<EnvSampler> sampler;
    if (settings.env_sampling) sampler.emplace(env);

    Tracer tracer{scene, material, spec.uv[idx], env, sampler ? &*sampler : nullptr, settings.max_bounces};
    CameraModel cam(spec.camera, settings.width, settings.height);

    RenderOutput out;
    out.image = FloatImage(settings.width, settings.height, 3);
    const int tiles_x = (settings.width + kTile - 1) / kTile, tiles_y = (settings.height + kTile - 1) / kTile;
    std::atomic<std::uint64_t> nan_count{0};
    parallel_for(
        static_cast<std::size_t>(tiles_x) * tiles_y,
        [&](std::size_t tile) {
            const int tx = static_cast<int>(tile % tiles_x) * kTile, ty = static_cast<int>(tile / tiles_x) * kTile;
            std::uint64_t local_nan = 0;
            for (int y = ty; y < std::min(ty + kTile, settings.height); ++y) {
                for (int x = tx; x < std::min(tx + kTile, settings.width); ++x) {
                    const auto pixel = static_cast<std::uint64_t>(y) * settings.width + x;
                    Rng rng(derive_seed(settings.seed, pixel));
                    Vec3 sum{};
                    for (int s = 0; s < settings.samples_per_pixel; ++s) {
                        float jx = rng.uniform(), jy = rng.uniform();
                        Vec3 L = tracer.trace(cam.ray(x + jx, y + jy, settings.width, settings.height), rng);
                        if (!is_finite(L)) {
                            ++local_nan;
                            continue;
                        }
                        sum += L;
                    }
                    out.image.set_rgb(x, y, sum / static_cast<float>(settings.samples_per_pixel));
                }
            }
            nan_count += local_nan;
        },
        settings.threads);

    out.image_srgb = tonemap(out.image, settings.exposure);
    out.mask = render_mask(scene, settings.width, settings.height);
    out.stats.nan_samples = nan_count.load();
    out.stats.samples_per_pixel = settings.samples_per_pixel;
    out.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

RenderOutput render(const procgen::SceneSpec& scene, int image_index, const pbr::MaterialSpec& material,
                    const RenderSettings& settings) {
    PreparedScene prepared(scene);
    return render(prepared, image_index, material, settings);
}

std::uint64_t scene_render_seed(std::uint64_t seed, int scene_index) {
    return derive_seed(derive_seed(seed, "render"), static_cast<std::uint64_t>(scene_index));
}

RenderedSet render_set(const procgen::SceneSet& set, const RenderSettings& settings, const RenderProgress& progress) {
    RenderedSet out;
    for (int k = 0; k < procgen::kScenesPerSet; ++k) {
        const auto& scene = set.scenes[static_cast<std::size_t>(k)];
        PreparedScene prepared(scene);
        RenderSettings s = settings;
        s.seed = scene_render_seed(settings.seed, k);
        for (int i = 0; i < procgen::kImagesPerScene; ++i) {
            pbr::MixtureRatio r(set.ratios[static_cast<std::size_t>(i)]);
            try {
                auto material = pbr::mix_materials(set.material_a, set.material_b, r);
                out.images[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = render(prepared, i, material, s);
            } catch (const Error& e) {
                throw RenderError(fmt::format("set {} scene {} ratio {}: {}", set.set_id, k, r.value(), e.what()));
            }
            if (progress) progress(k, i);
        }
        out.masks[static_cast<std::size_t>(k)] = out.images[static_cast<std::size_t>(k)][0].mask;
        if (!out.masks[static_cast<std::size_t>(k)].any())
            throw RenderError(fmt::format("set {} scene {}: main object not visible", set.set_id, k));
    }
    return out;
}

}  // namespace matforge::render
