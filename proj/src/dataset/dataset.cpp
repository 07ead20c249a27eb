// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/dataset/dataset.hpp"

#include <algorithm>
#include <set>
#include <system_error>

#include <fmt/format.h>

#include "matforge/core/error.hpp"
#include "matforge/core/image_io.hpp"
#include "matforge/dataset/json_util.hpp"

namespace fs = std::filesystem;

namespace matforge::dataset {

using procgen::kImagesPerScene;
using procgen::kScenesPerSet;

std::string image_ref(std::string_view set_id, int scene_index, double ratio) {
    return fmt::format("{}/{}/{}", set_dir_name(set_id), scene_dir_name(scene_index), image_file_name(ratio));
}

std::string mask_ref(std::string_view set_id, int scene_index) {
    return fmt::format("{}/{}/{}", set_dir_name(set_id), scene_dir_name(scene_index), kMaskFile);
}

namespace {

constexpr std::string_view kTempPrefix = ".tmp_set_";

void check_complete(const SetManifest& manifest, const render::RenderedSet& rendered) {
    const auto& first = rendered.images[0][0].image_srgb;
    int w = first.width, h = first.height;
    if (w <= 0 || h <= 0) throw IncompleteSetError(fmt::format("set {}: scene 0 image 0 is empty", manifest.set_id));
    for (int k = 0; k < kScenesPerSet; ++k) {
        for (int i = 0; i < kImagesPerScene; ++i) {
            const auto& img = rendered.images[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)].image_srgb;
            if (img.width != w || img.height != h || img.channels != 3 ||
                img.data.size() != static_cast<std::size_t>(w) * h * 3)
                throw IncompleteSetError(
                    fmt::format("set {}: scene {} image {} is missing or not {}x{} RGB", manifest.set_id, k, i, w, h));
        }
        const Mask& m = rendered.masks[static_cast<std::size_t>(k)];
        if (m.width != w || m.height != h || m.data.size() != static_cast<std::size_t>(w) * h)
            throw IncompleteSetError(fmt::format("set {}: scene {} mask is missing or not {}x{}", manifest.set_id, k, w, h));
        if (!m.any()) throw IncompleteSetError(fmt::format("set {}: scene {} mask is empty", manifest.set_id, k));
    }
}

std::string stats_json(const SetManifest& manifest, const render::RenderedSet& rendered, bool timing) {
    Json j;
    j["set_id"] = manifest.set_id;
    Json scenes = Json::array();
    std::uint64_t total_nan = 0;
    double total_seconds = 0;
    for (int k = 0; k < kScenesPerSet; ++k) {
        Json images = Json::array();
        for (int i = 0; i < kImagesPerScene; ++i) {
            const auto& st = rendered.images[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)].stats;
            Json ji{{"file", image_file_name(manifest.ratios[static_cast<std::size_t>(i)])},
                    {"samples_per_pixel", st.samples_per_pixel},
                    {"nan_samples", st.nan_samples}};
            if (timing) ji["seconds"] = st.seconds;
            total_nan += st.nan_samples;
            total_seconds += st.seconds;
            images.push_back(std::move(ji));
        }
        scenes.push_back({{"index", k}, {"images", std::move(images)}});
    }
    j["nan_samples"] = total_nan;
    if (timing) j["seconds"] = total_seconds;
    j["scenes"] = std::move(scenes);
    return j.dump(2) + "\n";
}

void remove_all_or_throw(const fs::path& p) {
    std::error_code ec;
    fs::remove_all(p, ec);
    if (ec) throw IoError(fmt::format("{}: cannot remove: {}", p.string(), ec.message()));
}

}  // namespace

fs::path write_set(const fs::path& root, const SetManifest& manifest, const render::RenderedSet& rendered,
                   const WriteOptions& options) {
    manifest.validate();
    check_complete(manifest, rendered);

    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) throw IoError(fmt::format("{}: cannot create directory: {}", root.string(), ec.message()));

    const fs::path final_dir = root / set_dir_name(manifest.set_id);
    const fs::path tmp = root / fmt::format("{}{}", kTempPrefix, manifest.set_id);
    remove_all_or_throw(tmp);
    fs::create_directory(tmp, ec);
    if (ec) throw IoError(fmt::format("{}: cannot create directory: {}", tmp.string(), ec.message()));

    for (int k = 0; k < kScenesPerSet; ++k) {
        fs::path scene = tmp / scene_dir_name(k);
        fs::create_directory(scene, ec);
        if (ec) throw IoError(fmt::format("{}: cannot create directory: {}", scene.string(), ec.message()));
        for (int i = 0; i < kImagesPerScene; ++i) {
            const auto& out = rendered.images[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
            double ratio = manifest.ratios[static_cast<std::size_t>(i)];
            write_png(scene / image_file_name(ratio), out.image_srgb);
            if (options.keep_linear) {
                if (out.image.empty())
                    throw IncompleteSetError(
                        fmt::format("set {}: scene {} image {} has no linear output", manifest.set_id, k, i));
                write_hdr(scene / image_file_name(ratio, ".hdr"), out.image);
            }
        }
        write_png(scene / kMaskFile, rendered.masks[static_cast<std::size_t>(k)]);
    }
    // Metadata last: a temp dir without it never validates.
    write_text_atomic(tmp / kMetadataFile, manifest_to_json(manifest));

    remove_all_or_throw(final_dir);
    fs::rename(tmp, final_dir, ec);
    if (ec)
        throw IoError(fmt::format("{} -> {}: cannot rename: {}", tmp.string(), final_dir.string(), ec.message()));

    write_text_atomic(root / fmt::format("{}.stats.json", set_dir_name(manifest.set_id)),
                      stats_json(manifest, rendered, options.timing));
    return final_dir;
}

// ---- validation ----

const SetEntry* DatasetIndex::find(std::string_view set_id) const {
    for (const auto& s : sets)
        if (s.manifest.set_id == set_id) return &s;
    return nullptr;
}

SetEntry validate_set(const fs::path& set_dir) {
    SetEntry entry;
    entry.dir = set_dir;
    const fs::path meta = set_dir / kMetadataFile;
    if (!fs::is_regular_file(meta)) throw IncompleteSetError(fmt::format("{}: missing {}", set_dir.string(), kMetadataFile));
    entry.manifest = manifest_from_json(read_text_file(meta), meta.string());
    const SetManifest& m = entry.manifest;

    std::string expected_dir = set_dir_name(m.set_id);
    if (set_dir.filename().string() != expected_dir)
        throw ValidationError(
            fmt::format("{}: directory name does not match set_id '{}'", set_dir.string(), m.set_id));

    // Inventory: exactly the expected files, optional linear .hdr twins.
    std::set<std::string> expected{std::string(kMetadataFile)};
    std::set<std::string> optional;
    for (int k = 0; k < kScenesPerSet; ++k) {
        std::string sd = scene_dir_name(k);
        for (const auto& im : m.scenes[static_cast<std::size_t>(k)].images) {
            expected.insert(sd + "/" + im.file);
            optional.insert(sd + "/" + image_file_name(im.ratio, ".hdr"));
        }
        expected.insert(sd + "/" + std::string(kMaskFile));
    }
    std::set<std::string> found;
    for (const auto& e : fs::recursive_directory_iterator(set_dir)) {
        if (e.is_directory()) continue;
        std::string rel = fs::relative(e.path(), set_dir).generic_string();
        if (!expected.contains(rel) && !optional.contains(rel))
            throw ValidationError(fmt::format("{}: unexpected file {}", set_dir.string(), rel));
        found.insert(rel);
    }
    for (int k = 0; k < kScenesPerSet; ++k) {
        std::string sd = scene_dir_name(k);
        for (const auto& f : expected)
            if (f.starts_with(sd + "/") && !found.contains(f))
                throw IncompleteSetError(fmt::format("{}: scene {} is missing {}", set_dir.string(), k,
                                                     f.substr(sd.size() + 1)));
    }

    for (int k = 0; k < kScenesPerSet; ++k) {
        fs::path sd = set_dir / scene_dir_name(k);
        auto check_size = [&](const fs::path& p, int w, int h) {
            if (entry.width == 0) {
                entry.width = w;
                entry.height = h;
            }
            if (w != entry.width || h != entry.height)
                throw ValidationError(fmt::format("{}: scene {}: {} is {}x{}, expected {}x{}", set_dir.string(), k,
                                                  p.filename().string(), w, h, entry.width, entry.height));
        };
        for (const auto& im : m.scenes[static_cast<std::size_t>(k)].images) {
            Image8 img = read_png8(sd / im.file);
            if (img.channels != 3)
                throw ValidationError(fmt::format("{}: scene {}: {} is not RGB", set_dir.string(), k, im.file));
            check_size(sd / im.file, img.width, img.height);
        }
        Image8 mask = read_png8(sd / kMaskFile);
        if (mask.channels != 1)
            throw ValidationError(fmt::format("{}: scene {}: mask is not single-channel", set_dir.string(), k));
        check_size(sd / kMaskFile, mask.width, mask.height);
        bool any = false;
        for (auto v : mask.data) {
            if (v != 0 && v != 255)
                throw ValidationError(fmt::format("{}: scene {}: mask is not binary", set_dir.string(), k));
            any = any || v == 255;
        }
        if (!any) throw IncompleteSetError(fmt::format("{}: scene {}: mask is empty", set_dir.string(), k));
    }
    return entry;
}

DatasetIndex index_dataset(const fs::path& root) {
    if (!fs::is_directory(root)) throw IoError(fmt::format("{}: not a directory", root.string()));
    DatasetIndex index;
    index.root = root;
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(root))
        if (e.is_directory()) dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());
    bool any_set = false;
    for (const auto& d : dirs) {
        std::string name = d.filename().string();
        if (name.starts_with(kTempPrefix)) {
            any_set = true;
            index.problems.push_back({d, "unfinished set write (temporary directory)"});
            continue;
        }
        if (!name.starts_with("set_")) {
            index.problems.push_back({d, "not a set directory"});
            continue;
        }
        any_set = true;
        try {
            index.sets.push_back(validate_set(d));
        } catch (const Error& e) {
            index.problems.push_back({d, e.what()});
        }
    }
    if (!any_set) throw EmptyDatasetError(fmt::format("{}: no sets found", root.string()));
    return index;
}

std::vector<simloss::SetImages> sets_for_sampling(const DatasetIndex& index) {
    std::vector<simloss::SetImages> out;
    for (const auto& s : index.sets) {
        simloss::SetImages si{s.manifest.set_id, s.manifest.vessel, {}};
        for (int k = 0; k < kScenesPerSet; ++k)
            for (double r : s.manifest.ratios)
                si.images.push_back({image_ref(s.manifest.set_id, k, r), s.manifest.set_id, k, r});
        out.push_back(std::move(si));
    }
    return out;
}

}  // namespace matforge::dataset
