// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "matforge/dataset/dataset.hpp"
#include "matforge/dataset/manifest.hpp"
#include "matforge/evalbench/attention.hpp"
#include "matforge/evalbench/benchmark.hpp"
#include "matforge/procgen/scene.hpp"
#include "matforge/render/renderer.hpp"
#include "matforge/simloss/loss.hpp"

namespace matforge::dataset {

struct GenOptions {
    std::uint64_t seed = 0;
    std::uint64_t start = 0;  // first set index
    std::uint64_t count = 1;
    double vessel_probability = 0.5;
    /// Unset: 0.5 with a texture directory, 0 without.
    std::optional<double> textured_probability;
    double combine_probability = 0.5;
    int max_background_objects = 4;
    std::string texture_dir;
    std::string hdri_dir;
    int sky_count = 32;
    int width = 128, height = 128, samples_per_pixel = 32, max_bounces = 6;
    bool env_sampling = true;
    float exposure = 1.0f;
    unsigned threads = 0;  // 0: worker_count()
    WriteOptions write;
    bool dump_geometry = false;  // OBJ files under set_<id>.geometry/

    void validate() const;
};

/// Id of set index i: six-digit zero-padded decimal.
std::string set_id_for(std::uint64_t set_index);

/// Everything needed to regenerate set `set_index` of a run.
SourceRecord source_for(const GenOptions& options, std::uint64_t set_index);

/// Material and environment libraries named by a source record. Loading is deterministic
/// (sorted directory order) so the same record always yields the same libraries.
procgen::GenerationConfig generation_config(const SourceRecord& source);

render::RenderSettings render_settings(const SourceRecord& source, unsigned threads = 0);

/// Regenerates the SceneSet described by `source`.
procgen::SceneSet regenerate_set(const SourceRecord& source, const procgen::GenerationConfig& config);

/// Writes world-space meshes of every scene as OBJ files under `dir/scene_<k>/`.
void dump_geometry(const std::filesystem::path& dir, const procgen::SceneSet& set);

using GenProgress = std::function<void(const std::string& set_id, int scene, int image)>;

/// Generates, renders and writes sets [start, start + count). Sets run concurrently when
/// there are at least as many sets as workers; output bytes do not depend on scheduling.
std::vector<std::filesystem::path> generate_dataset(const std::filesystem::path& root, const GenOptions& options,
                                                    const GenProgress& progress = {});

/// Re-renders the set described by a manifest's source block into `root`. Throws
/// ValidationError when the manifest has no source block or regeneration disagrees with it.
std::filesystem::path rerender_set(const SetManifest& manifest, const std::filesystem::path& root,
                                   std::optional<SourceRecord> render_override = std::nullopt,
                                   const WriteOptions& write = {}, unsigned threads = 0);

/// Loads an 8-bit PNG as [0,1] RGB (sRGB-encoded values, no decode).
FloatImage load_rgb(const std::filesystem::path& path);

/// Baseline descriptors for every image of an indexed dataset, refs as in image_ref().
std::vector<simloss::Descriptor> describe_dataset(const DatasetIndex& index, evalbench::AttentionMode mode,
                                                  const evalbench::AttentionOptions& options = {});

/// Baseline descriptors for every benchmark entry, refs as the entry's image path relative to `base`.
std::vector<simloss::Descriptor> describe_benchmark(const evalbench::BenchmarkIndex& index,
                                                    const std::filesystem::path& base, evalbench::AttentionMode mode,
                                                    const evalbench::AttentionOptions& options = {});

/// Image ref of a benchmark entry: its path relative to `base`, generic separators.
std::string benchmark_ref(const evalbench::BenchmarkEntry& entry, const std::filesystem::path& base);

}  // namespace matforge::dataset
