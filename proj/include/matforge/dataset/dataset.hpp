// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "matforge/dataset/manifest.hpp"
#include "matforge/render/renderer.hpp"
#include "matforge/simloss/loss.hpp"

namespace matforge::dataset {

inline constexpr std::string_view kMetadataFile = "metadata.json";
inline constexpr std::string_view kMaskFile = "mask.png";

struct WriteOptions {
    bool keep_linear = false;  // also write img_rNNN.hdr next to each PNG
    bool timing = false;       // include wall-clock seconds in the stats sidecar
};

/// Writes `set_<id>/` under `root` through a temporary directory renamed into place,
/// replacing an existing set of the same id. Render stats go to `set_<id>.stats.json`
/// beside the set directory. Throws IncompleteSetError when any image or mask is
/// missing, empty or mismatched in size; IoError on filesystem failures.
std::filesystem::path write_set(const std::filesystem::path& root, const SetManifest& manifest,
                                const render::RenderedSet& rendered, const WriteOptions& options = {});

/// Reference of an image relative to the dataset root: `set_<id>/scene_<k>/img_r025.png`.
std::string image_ref(std::string_view set_id, int scene_index, double ratio);
std::string mask_ref(std::string_view set_id, int scene_index);

struct SetEntry {
    std::filesystem::path dir;
    SetManifest manifest;
    int width = 0, height = 0;
};

struct SetProblem {
    std::filesystem::path path;
    std::string message;
};

struct DatasetIndex {
    std::filesystem::path root;
    std::vector<SetEntry> sets;        // sorted by directory name
    std::vector<SetProblem> problems;  // one per rejected entry

    bool ok() const { return problems.empty(); }
    const SetEntry* find(std::string_view set_id) const;
};

/// Checks one set directory: manifest, file inventory (36 PNG + metadata, optional .hdr),
/// image sizes and nonempty binary masks. Throws ParseError, SchemaVersionError,
/// ValidationError or IncompleteSetError naming the scene.
SetEntry validate_set(const std::filesystem::path& set_dir);

/// Validates every entry of `root`. Unfinished temporary sets and unknown directories are
/// reported as problems, never skipped. Throws EmptyDatasetError when no set is found and
/// IoError when `root` is not a directory.
DatasetIndex index_dataset(const std::filesystem::path& root);

/// Sampler view of the index, one SetImages per set with every image of every scene.
std::vector<simloss::SetImages> sets_for_sampling(const DatasetIndex& index);

}  // namespace matforge::dataset
