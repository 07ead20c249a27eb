// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "matforge/core/image.hpp"
#include "matforge/procgen/scene.hpp"
#include "matforge/render/bvh.hpp"

namespace matforge::render {

struct RenderSettings {
    int width = 512;
    int height = 512;
    int samples_per_pixel = 120;
    int max_bounces = 6;
    std::uint64_t seed = 0;
    /// Next-event estimation against the environment with MIS. Off is the BSDF-sampling reference.
    bool env_sampling = true;
    float exposure = 1.0f;
    unsigned threads = 0;  // 0: worker_count()

    void validate() const;
};

struct RenderStats {
    std::uint64_t nan_samples = 0;
    int samples_per_pixel = 0;
    double seconds = 0;
};

struct RenderOutput {
    FloatImage image;  // linear RGB
    Image8 image_srgb;
    Mask mask;
    RenderStats stats;
};

/// clamp(v * exposure, 0, 1), sRGB transfer, round to 8 bits.
std::uint8_t tonemap_channel(float v, float exposure = 1.0f);
Image8 tonemap(const FloatImage& linear, float exposure = 1.0f);

enum class ObjectRole : std::uint8_t { Main, VesselGlass, Ground, Background };

/// Flattened, BVH-accelerated geometry of one scene. Keeps a reference to `scene`,
/// which must outlive it.
class PreparedScene {
public:
    explicit PreparedScene(const procgen::SceneSpec& scene);

    const procgen::SceneSpec& spec() const { return *scene_; }
    const Bvh& bvh() const { return bvh_; }

    struct Object {
        ObjectRole role;
        const pbr::MaterialSpec* material;  // null for the main object
        const procgen::UvTransform* uv;     // null for the main object (per-image transform)
    };
    const Object& object_of(std::uint32_t triangle) const { return objects_[tri_object_[triangle]]; }

    struct SurfacePoint {
        Vec3 p, ng, ns, tangent;
        Vec2 uv;
    };
    SurfacePoint surface(const Ray& ray, const Hit& hit) const;

private:
    void add(const procgen::Mesh& mesh, Object obj);

    const procgen::SceneSpec* scene_;
    std::vector<Object> objects_;
    std::vector<std::uint32_t> tri_object_;
    std::vector<Vec3> p0_, p1_, p2_;
    std::vector<std::array<Vec3, 3>> normals_;
    std::vector<std::array<Vec2, 3>> uvs_;
    std::vector<Vec3> tangents_;
    Bvh bvh_;
};

/// Pixels whose centre ray, passing straight through at most four vessel-glass
/// interfaces, first meets the main object.
Mask render_mask(const PreparedScene& scene, int width, int height);

/// Renders image `image_index` (0-4) of a scene with `material` on the main object.
RenderOutput render(const PreparedScene& scene, int image_index, const pbr::MaterialSpec& material,
                    const RenderSettings& settings);
RenderOutput render(const procgen::SceneSpec& scene, int image_index, const pbr::MaterialSpec& material,
                    const RenderSettings& settings);

/// Seed of scene k in a set; shared by its five ratio images.
std::uint64_t scene_render_seed(std::uint64_t seed, int scene_index);

struct RenderedSet {
    std::array<std::array<RenderOutput, procgen::kImagesPerScene>, procgen::kScenesPerSet> images;
    std::array<Mask, procgen::kScenesPerSet> masks;
};

using RenderProgress = std::function<void(int scene, int image)>;

/// All 30 images of a set; throws RenderError naming the scene and ratio on failure.
RenderedSet render_set(const procgen::SceneSet& set, const RenderSettings& settings,
                       const RenderProgress& progress = {});

}  // namespace matforge::render
