// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/dataset/pipeline.hpp"

#include <mutex>

#include <fmt/format.h>

#include "matforge/core/error.hpp"
#include "matforge/core/image_io.hpp"
#include "matforge/core/parallel.hpp"
#include "matforge/core/rng.hpp"
#include "matforge/evalbench/descriptor.hpp"
#include "matforge/pbr/material_library.hpp"

namespace fs = std::filesystem;

namespace matforge::dataset {

void GenOptions::validate() const {
    auto prob = [](double p, const char* name) {
        if (!(p >= 0 && p <= 1)) throw InvalidArgument(fmt::format("{} must be in [0, 1], got {}", name, p));
    };
    prob(vessel_probability, "vessel probability");
    prob(combine_probability, "combine probability");
    if (textured_probability) {
        prob(*textured_probability, "textured probability");
        if (*textured_probability > 0 && texture_dir.empty())
            throw InvalidArgument("textured probability > 0 needs a texture directory");
    }
    if (count == 0) throw InvalidArgument("count must be at least 1");
    if (max_background_objects < 0) throw InvalidArgument("max background objects must be >= 0");
    if (sky_count < 1) throw InvalidArgument("sky count must be >= 1");
    render_settings(source_for(*this, start)).validate();
}

std::string set_id_for(std::uint64_t set_index) { return fmt::format("{:06d}", set_index); }

SourceRecord source_for(const GenOptions& o, std::uint64_t set_index) {
    SourceRecord s;
    s.seed = o.seed;
    s.set_index = set_index;
    s.vessel_probability = o.vessel_probability;
    s.textured_probability = o.textured_probability.value_or(o.texture_dir.empty() ? 0.0 : 0.5);
    s.combine_probability = o.combine_probability;
    s.max_background_objects = o.max_background_objects;
    s.texture_dir = o.texture_dir;
    s.hdri_dir = o.hdri_dir;
    s.sky_count = o.sky_count;
    s.width = o.width;
    s.height = o.height;
    s.samples_per_pixel = o.samples_per_pixel;
    s.max_bounces = o.max_bounces;
    s.render_seed = derive_seed(derive_seed(o.seed, set_index), "render");
    s.env_sampling = o.env_sampling;
    s.exposure = o.exposure;
    return s;
}

procgen::GenerationConfig generation_config(const SourceRecord& s) {
    procgen::GenerationConfig c;
    if (!s.texture_dir.empty()) c.material_library = pbr::load_material_library(s.texture_dir);
    c.environment_library = s.hdri_dir.empty() ? render::procedural_sky_library(derive_seed(s.seed, "env"), s.sky_count)
                                               : render::load_environment_library(s.hdri_dir);
    c.vessel_probability = s.vessel_probability;
    c.textured_probability = s.textured_probability;
    c.combine_probability = s.combine_probability;
    c.max_background_objects = s.max_background_objects;
    return c;
}

render::RenderSettings render_settings(const SourceRecord& s, unsigned threads) {
    render::RenderSettings r;
    r.width = s.width;
    r.height = s.height;
    r.samples_per_pixel = s.samples_per_pixel;
    r.max_bounces = s.max_bounces;
    r.seed = s.render_seed;
    r.env_sampling = s.env_sampling;
    r.exposure = s.exposure;
    r.threads = threads;
    return r;
}

procgen::SceneSet regenerate_set(const SourceRecord& s, const procgen::GenerationConfig& config) {
    return procgen::generate_scene_set(derive_seed(s.seed, s.set_index), config, set_id_for(s.set_index));
}

void dump_geometry(const fs::path& dir, const procgen::SceneSet& set) {
    for (int k = 0; k < procgen::kScenesPerSet; ++k) {
        const auto& sc = set.scenes[static_cast<std::size_t>(k)];
        fs::path sd = dir / scene_dir_name(k);
        fs::create_directories(sd);
        procgen::write_obj(sd / "main.obj", sc.main_object);
        if (sc.vessel) procgen::write_obj(sd / "vessel.obj", sc.vessel->mesh);
        procgen::write_obj(sd / "ground.obj", sc.ground.mesh);
        for (std::size_t b = 0; b < sc.background_objects.size(); ++b)
            procgen::write_obj(sd / fmt::format("background_{}.obj", b), sc.background_objects[b].mesh);
    }
}

namespace {

fs::path produce_set(const fs::path& root, const SourceRecord& source, const procgen::GenerationConfig& config,
                     const WriteOptions& write, bool geometry, unsigned threads, const GenProgress& progress) {
    procgen::SceneSet set = regenerate_set(source, config);
    set.validate();
    SetManifest manifest = manifest_from_set(set);
    manifest.source = source;
    if (geometry) {
        fs::path gdir = root / (set_dir_name(set.set_id) + ".geometry");
        fs::remove_all(gdir);
        dump_geometry(gdir, set);
    }
    render::RenderedSet rendered;
    try {
        rendered = render::render_set(set, render_settings(source, threads), [&](int scene, int image) {
            if (progress) progress(set.set_id, scene, image);
        });
    } catch (const RenderError&) {
        throw;
    } catch (const Error& e) {
        throw RenderError(fmt::format("set {}: {}", set.set_id, e.what()));
    }
    return write_set(root, manifest, rendered, write);
}

}  // namespace

std::vector<fs::path> generate_dataset(const fs::path& root, const GenOptions& options, const GenProgress& progress) {
    options.validate();
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) throw IoError(fmt::format("{}: cannot create directory: {}", root.string(), ec.message()));

    // Libraries depend on the run, not the set index.
    const procgen::GenerationConfig config = generation_config(source_for(options, options.start));
    unsigned workers = options.threads ? options.threads : worker_count();
    bool per_set = workers > 1 && options.count >= workers;

    std::mutex progress_mutex;
    GenProgress locked;
    if (progress)
        locked = [&](const std::string& id, int scene, int image) {
            std::lock_guard lock(progress_mutex);
            progress(id, scene, image);
        };

    std::vector<fs::path> out(options.count);
    parallel_for(
        options.count,
        [&](std::size_t i) {
            out[i] = produce_set(root, source_for(options, options.start + i), config, options.write,
                                 options.dump_geometry, per_set ? 1u : workers, locked);
        },
        per_set ? workers : 1u);
    return out;
}

fs::path rerender_set(const SetManifest& manifest, const fs::path& root, std::optional<SourceRecord> render_override,
                      const WriteOptions& write, unsigned threads) {
    if (!manifest.source)
        throw ValidationError(fmt::format("set {}: manifest has no source block to regenerate from", manifest.set_id));
    SourceRecord source = *manifest.source;
    procgen::GenerationConfig config = generation_config(source);
    procgen::SceneSet set = regenerate_set(source, config);
    SetManifest regenerated = manifest_from_set(set);
    regenerated.source = manifest.source;
    if (!(regenerated == manifest))
        throw ValidationError(fmt::format("set {}: regenerating from the source block does not reproduce the manifest",
                                          manifest.set_id));
    if (render_override) {
        // Only render fields may change; generation inputs stay those of the manifest.
        source.width = render_override->width;
        source.height = render_override->height;
        source.samples_per_pixel = render_override->samples_per_pixel;
        source.max_bounces = render_override->max_bounces;
        source.render_seed = render_override->render_seed;
        source.env_sampling = render_override->env_sampling;
        source.exposure = render_override->exposure;
    }
    return produce_set(root, source, config, write, false, threads, {});
}

FloatImage load_rgb(const fs::path& path) {
    Image8 img = read_png8(path);
    if (img.channels == 3) return to_unit_float(img);
    if (img.channels != 1) throw InvalidArgument(fmt::format("{}: expected a gray or RGB image", path.string()));
    Image8 rgb(img.width, img.height, 3);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        for (int c = 0; c < 3; ++c) rgb.data[i * 3 + static_cast<std::size_t>(c)] = img.data[i];
    return to_unit_float(rgb);
}

namespace {

std::vector<float> describe_one(const fs::path& image, const Mask& mask, evalbench::AttentionMode mode,
                                const evalbench::AttentionOptions& options) {
    FloatImage img = load_rgb(image);
    if (img.width != mask.width || img.height != mask.height)
        throw ValidationError(fmt::format("{}: image and mask sizes differ", image.string()));
    auto focused = evalbench::apply_attention(img, mask, mode, options);
    return evalbench::baseline_descriptor(focused.image, focused.mask);
}

}  // namespace

std::vector<simloss::Descriptor> describe_dataset(const DatasetIndex& index, evalbench::AttentionMode mode,
                                                  const evalbench::AttentionOptions& options) {
    struct Job {
        fs::path image, mask;
        std::string ref;
    };
    std::vector<Job> jobs;
    for (const auto& s : index.sets)
        for (int k = 0; k < procgen::kScenesPerSet; ++k)
            for (const auto& im : s.manifest.scenes[static_cast<std::size_t>(k)].images)
                jobs.push_back({s.dir / scene_dir_name(k) / im.file, s.dir / scene_dir_name(k) / kMaskFile,
                                image_ref(s.manifest.set_id, k, im.ratio)});
    std::vector<simloss::Descriptor> out(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        out[i] = {jobs[i].ref, describe_one(jobs[i].image, read_mask(jobs[i].mask), mode, options)};
    });
    return out;
}

std::string benchmark_ref(const evalbench::BenchmarkEntry& entry, const fs::path& base) {
    return entry.image.lexically_relative(base).generic_string();
}

std::vector<simloss::Descriptor> describe_benchmark(const evalbench::BenchmarkIndex& index, const fs::path& base,
                                                    evalbench::AttentionMode mode,
                                                    const evalbench::AttentionOptions& options) {
    std::vector<simloss::Descriptor> out(index.entries.size());
    parallel_for(index.entries.size(), [&](std::size_t i) {
        const auto& e = index.entries[i];
        out[i] = {benchmark_ref(e, base), describe_one(e.image, read_mask(e.mask), mode, options)};
    });
    return out;
}

}  // namespace matforge::dataset
