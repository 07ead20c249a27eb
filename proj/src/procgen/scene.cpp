// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/procgen/scene.hpp"

#include <cmath>

#include <fmt/format.h>

#include "matforge/core/error.hpp"
#include "matforge/core/rng.hpp"
#include "matforge/pbr/mixing.hpp"

namespace matforge::procgen {

std::string_view policy_name(BackgroundPolicy p) {
    switch (p) {
        case BackgroundPolicy::Fixed: return "fixed";
        case BackgroundPolicy::RotateEnv: return "rotate_env";
        case BackgroundPolicy::ReplaceEnv: return "replace_env";
    }
    return "unknown";
}

BackgroundPolicy parse_policy(std::string_view s) {
    for (auto p : {BackgroundPolicy::Fixed, BackgroundPolicy::RotateEnv, BackgroundPolicy::ReplaceEnv})
        if (policy_name(p) == s) return p;
    throw ParseError(fmt::format("unknown background policy '{}'", s));
}

float subtended_fraction(const Camera& camera, const BoundingSphere& sphere) {
    float dist = length(sphere.center - camera.position);
    if (dist <= sphere.radius) return 1.0f;
    float angle = 2.0f * std::asin(sphere.radius / dist);
    return angle / (camera.vfov_deg * kPi / 180.0f);
}

Camera frame_camera(const BoundingSphere& target, std::uint64_t seed, const std::optional<BoundingSphere>& keep_in_view) {
    if (!(target.radius > 0)) throw GenerationError("cannot frame an empty object");
    Rng rng(seed);
    for (int attempt = 0; attempt < kMaxFramingAttempts; ++attempt) {
        Camera cam;
        cam.vfov_deg = static_cast<float>(rng.uniform(30.0, 60.0));
        float fill = static_cast<float>(rng.uniform(0.3, 0.8));
        float elevation = static_cast<float>(rng.uniform(5.0, 45.0)) * kPi / 180.0f;
        float azimuth = rng.uniform() * kTwoPi;
        float half = 0.5f * fill * cam.vfov_deg * kPi / 180.0f;
        float dist = target.radius / std::sin(half);
        if (keep_in_view) {
            float half_fov = 0.5f * cam.vfov_deg * kPi / 180.0f;
            float need = length(keep_in_view->center - target.center) + keep_in_view->radius / std::sin(half_fov);
            dist = std::max(dist, need);
        }
        Vec3 dir{std::cos(elevation) * std::sin(azimuth), std::sin(elevation), std::cos(elevation) * std::cos(azimuth)};
        cam.look_at = target.center;
        cam.position = target.center + dir * dist;
        if (cam.position.y > 0.02f && subtended_fraction(cam, target) >= kMinSubtendedFraction) return cam;
    }
    throw GenerationError(fmt::format("camera framing failed after {} attempts", kMaxFramingAttempts));
}

Mesh make_ground_mesh(float height, float half_size) {
    Mesh m;
    m.vertices = {{-half_size, height, -half_size}, {-half_size, height, half_size},
                  {half_size, height, half_size}, {half_size, height, -half_size}};
    m.normals.assign(4, Vec3{0, 1, 0});
    m.uv = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
    m.triangles = {{0, 1, 2}, {0, 2, 3}};
    return m;
}

namespace {

constexpr float kGroundUvTiling = 30.0f;
constexpr std::uint64_t kMaxVesselAttempts = 16;
constexpr float kMinContentFraction = 0.4f;

Vec3 random_unit(Rng& rng) {
    float z = 2.0f * rng.uniform() - 1.0f;
    float phi = rng.uniform() * kTwoPi;
    float r = std::sqrt(std::max(0.0f, 1.0f - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

/// Random rotation, uniform scale to `radius`, then rests on y = 0 centred at `xz`.
Affine place_on_ground(const Mesh& mesh, Rng& rng, float radius, Vec2 xz) {
    Affine rot = Affine::rotation(random_unit(rng), rng.uniform() * kTwoPi);
    BoundingSphere s = transformed(mesh, rot).bounding_sphere();
    float k = radius / s.radius;
    Affine scaled = Affine::scaling({k, k, k}) * rot;
    Bounds b = transformed(mesh, scaled).bounds();
    Vec3 c = b.center();
    return Affine::translation({xz.x - c.x, -b.lo.y, xz.y - c.z}) * scaled;
}

pbr::MaterialKind draw_kind(Rng& rng, const GenerationConfig& config) {
    return rng.bernoulli(config.textured_probability) ? pbr::MaterialKind::Textured : pbr::MaterialKind::Uniform;
}

pbr::MaterialSpec glass_material(std::uint64_t seed) {
    Rng rng(seed);
    float g = static_cast<float>(rng.uniform(0.85, 1.0));
    Vec3 tint{g * static_cast<float>(rng.uniform(0.95, 1.0)), g * static_cast<float>(rng.uniform(0.95, 1.0)),
              g * static_cast<float>(rng.uniform(0.95, 1.0))};
    float roughness = static_cast<float>(rng.uniform(0.0, 0.15));
    float ior = static_cast<float>(rng.uniform(1.4, 1.6));
    return pbr::MaterialSpec::uniform(fmt::format("glass-{:016x}", seed), tint, roughness, 0.0f, 1.0f, ior);
}

struct Cone {
    Vec3 apex, axis;
    float dist, half_angle;
};

bool blocks_view(const Cone& cone, const BoundingSphere& s) {
    Vec3 to = s.center - cone.apex;
    float d = length(to);
    if (d <= s.radius + 0.05f) return true;
    float ang = std::acos(std::clamp(dot(to / d, cone.axis), -1.0f, 1.0f));
    return ang < cone.half_angle + std::asin(std::min(1.0f, s.radius / d)) + 0.05f;
}

SceneSpec generate_scene(std::uint64_t seed, int k, bool vessel, const GenerationConfig& config,
                         const pbr::SamplingOptions& sampling) {
    SceneSpec sc;
    sc.policy = policy_for_scene(k);
    Rng rng(derive_seed(seed, "layout"));

    BoundingSphere framed;
    std::optional<BoundingSphere> vessel_sphere;
    if (vessel) {
        // redraw vessels whose content would be a speck inside the glass
        std::uint64_t vseed = 0;
        VesselBuild vb;
        for (std::uint64_t attempt = 0; attempt < kMaxVesselAttempts; ++attempt) {
            vseed = derive_seed(derive_seed(seed, "vessel"), attempt);
            vb = generate_vessel(vseed, config.vessel_options);
            if (vb.content.bounding_sphere().radius >= kMinContentFraction * vb.vessel.bounding_sphere().radius) break;
        }
        Affine xf = Affine::rotation_y(rng.uniform() * kTwoPi);
        sc.main_placement = {"vessel", vseed, xf};
        sc.main_object = transformed(vb.content, xf);
        sc.main_object.watertight = vb.content.watertight;
        VesselSetup vs;
        vs.profile = vb.profile;
        vs.wall_thickness = vb.wall_thickness;
        vs.content = vb.content_kind;
        vs.fill_fraction = vb.fill_fraction;
        vs.glass = glass_material(derive_seed(seed, "glass"));
        vs.mesh = transformed(vb.vessel, xf);
        vs.mesh.watertight = vb.vessel.watertight;
        vessel_sphere = vs.mesh.bounding_sphere();
        framed = sc.main_object.bounding_sphere();
        sc.vessel = std::move(vs);
    } else {
        std::uint64_t pseed = derive_seed(seed, "shape");
        PrimitiveObject prim = generate_primitive_object(pseed);
        float radius = static_cast<float>(rng.uniform(0.1, 0.3));
        Affine xf = place_on_ground(prim.mesh, rng, radius, {0, 0});
        sc.main_placement = {std::string(primitive_name(prim.kind)), pseed, xf};
        sc.main_object = transformed(prim.mesh, xf);
        sc.main_object.watertight = prim.mesh.watertight;
        framed = sc.main_object.bounding_sphere();
    }
    sc.camera = frame_camera(framed, derive_seed(seed, "camera"), vessel_sphere);

    // lighting schedule
    const auto& envs = config.environment_library;
    float intensity = std::exp(static_cast<float>(rng.uniform(std::log(0.5), std::log(2.0))));
    auto pick_env = [&](Rng& r) {
        render::EnvironmentSpec e = envs[r.below(static_cast<std::uint32_t>(envs.size()))];
        e.rotation = r.uniform() * kTwoPi;
        e.intensity_scale = intensity;
        return e;
    };
    Rng env_rng(derive_seed(seed, "environment"));
    render::EnvironmentSpec first = pick_env(env_rng);
    for (int i = 0; i < kImagesPerScene; ++i) {
        if (i == 0 || sc.policy == BackgroundPolicy::Fixed) {
            sc.lighting[static_cast<std::size_t>(i)] = first;
        } else if (sc.policy == BackgroundPolicy::RotateEnv) {
            render::EnvironmentSpec e = first;
            e.rotation = env_rng.uniform() * kTwoPi;
            sc.lighting[static_cast<std::size_t>(i)] = e;
        } else {
            sc.lighting[static_cast<std::size_t>(i)] = pick_env(env_rng);
        }
        sc.uv[static_cast<std::size_t>(i)] = randomize_uv(derive_seed(derive_seed(seed, "uv"), static_cast<std::uint64_t>(i)));
    }

    // ground
    {
        Rng grng(derive_seed(seed, "ground"));
        sc.ground.height = 0;
        sc.ground.material =
            pbr::sample_random_material(derive_seed(seed, "ground-material"), draw_kind(grng, config),
                                        config.material_library, sampling);
        sc.ground.material.transmission = 0.0f;
        sc.ground.uv = randomize_uv(derive_seed(seed, "ground-uv"));
        sc.ground.uv.scale *= kGroundUvTiling;
        sc.ground.mesh = make_ground_mesh(0.0f);
    }

    // background clutter outside the camera-to-object cone
    Rng brng(derive_seed(seed, "background"));
    int count = static_cast<int>(brng.below(static_cast<std::uint32_t>(config.max_background_objects + 1)));
    const BoundingSphere& keep = vessel_sphere ? *vessel_sphere : framed;
    Vec3 axis = keep.center - sc.camera.position;
    float adist = length(axis);
    Cone cone{sc.camera.position, axis / adist, adist, std::asin(std::min(1.0f, keep.radius / adist))};
    for (int b = 0; b < count; ++b) {
        std::uint64_t oseed = derive_seed(derive_seed(seed, "background-object"), static_cast<std::uint64_t>(b));
        Rng orng(oseed);
        PrimitiveObject prim = generate_primitive_object(derive_seed(oseed, "shape"));
        for (int attempt = 0; attempt < 16; ++attempt) {
            float radius = static_cast<float>(orng.uniform(0.05, 0.4));
            float dist = static_cast<float>(orng.uniform(0.5, 3.0));
            float ang = orng.uniform() * kTwoPi;
            Vec2 xz{dist * std::cos(ang), dist * std::sin(ang)};
            Affine xf = place_on_ground(prim.mesh, orng, radius, xz);
            Mesh world = transformed(prim.mesh, xf);
            BoundingSphere s = world.bounding_sphere();
            float gap = std::hypot(s.center.x - keep.center.x, s.center.z - keep.center.z);
            if (gap < s.radius + keep.radius + 0.02f || blocks_view(cone, s)) continue;
            bool overlaps = false;
            for (const auto& other : sc.background_objects) {
                BoundingSphere o = other.mesh.bounding_sphere();
                if (length(o.center - s.center) < o.radius + s.radius) overlaps = true;
            }
            if (overlaps) continue;
            SceneObject obj;
            obj.placement = {std::string(primitive_name(prim.kind)), derive_seed(oseed, "shape"), xf};
            obj.mesh = std::move(world);
            obj.mesh.watertight = prim.mesh.watertight;
            obj.material = pbr::sample_random_material(derive_seed(oseed, "material"), draw_kind(orng, config),
                                                       config.material_library, sampling);
            obj.uv = randomize_uv(derive_seed(oseed, "uv"));
            sc.background_objects.push_back(std::move(obj));
            break;
        }
    }
    return sc;
}

}  // namespace

void SceneSpec::validate() const {
    main_object.validate();
    ground.mesh.validate();
    ground.material.validate();
    BoundingSphere framed = main_object.bounding_sphere();
    if (vessel) {
        vessel->mesh.validate();
        vessel->glass.validate();
        if (!vessel->mesh.watertight || !main_object.watertight)
            throw ValidationError("scene: vessel and content meshes must be watertight");
    }
    if (subtended_fraction(camera, framed) < kMinSubtendedFraction)
        throw ValidationError("scene: main object subtends less than the minimum image fraction");
    for (const auto& b : background_objects) {
        b.mesh.validate();
        b.material.validate();
    }
    for (const auto& e : lighting) e.validate();
    for (std::size_t i = 1; i < lighting.size(); ++i) {
        if (policy != BackgroundPolicy::ReplaceEnv && lighting[i].id != lighting[0].id)
            throw ValidationError(fmt::format("scene: {} policy changes the environment", policy_name(policy)));
        if (policy == BackgroundPolicy::Fixed && lighting[i].rotation != lighting[0].rotation)
            throw ValidationError("scene: fixed policy changes the environment rotation");
    }
}

void SceneSet::validate() const {
    material_a.validate();
    material_b.validate();
    if (material_a.kind != material_b.kind) throw ValidationError("set: materials A and B differ in kind");
    for (std::size_t i = 0; i < ratios.size(); ++i)
        if (ratios[i] != pbr::set_ratios()[i]) throw ValidationError("set: ratio schedule must be 0, .25, .5, .75, 1");
    for (int k = 0; k < kScenesPerSet; ++k) {
        const SceneSpec& sc = scenes[static_cast<std::size_t>(k)];
        if (sc.policy != policy_for_scene(k)) throw ValidationError(fmt::format("set: scene {} has the wrong policy", k));
        if (sc.vessel.has_value() != vessel) throw ValidationError(fmt::format("set: scene {} vessel flag mismatch", k));
        sc.validate();
    }
}

SceneSet generate_scene_set(std::uint64_t seed, const GenerationConfig& config, std::string set_id) {
    if (config.environment_library.empty()) throw EmptyLibraryError("generation needs at least one environment");
    if (config.textured_probability > 0 && config.material_library.empty())
        throw EmptyLibraryError("textured materials requested but the material library is empty");
    if (config.max_background_objects < 0) throw InvalidArgument("max_background_objects must be >= 0");

    Rng rng(derive_seed(seed, "set"));
    SceneSet set;
    set.set_id = std::move(set_id);
    set.seed = seed;
    set.vessel = rng.bernoulli(config.vessel_probability);
    pbr::SamplingOptions sampling{config.combine_probability};
    pbr::MaterialKind kind = draw_kind(rng, config);
    set.material_a = pbr::sample_random_material(derive_seed(seed, "material-a"), kind, config.material_library, sampling);
    for (std::uint64_t attempt = 0;; ++attempt) {
        set.material_b = pbr::sample_random_material(derive_seed(derive_seed(seed, "material-b"), attempt), kind,
                                                     config.material_library, sampling);
        if (set.material_b.id != set.material_a.id || attempt >= 8) break;
    }
    for (int k = 0; k < kScenesPerSet; ++k)
        set.scenes[static_cast<std::size_t>(k)] =
            generate_scene(derive_seed(derive_seed(seed, "scene"), static_cast<std::uint64_t>(k)), k, set.vessel, config,
                           sampling);
    for (std::size_t i = 0; i < set.ratios.size(); ++i) set.ratios[i] = pbr::set_ratios()[i];
    return set;
}

}  // namespace matforge::procgen
