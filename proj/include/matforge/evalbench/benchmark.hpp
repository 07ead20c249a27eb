// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace matforge::evalbench {

struct BenchmarkEntry {
    std::filesystem::path image;
    std::filesystem::path mask;
    std::string superclass;
    std::string subclass;
};

struct BenchmarkIndex {
    std::vector<BenchmarkEntry> entries;

    /// Every subclass has at least two images and belongs to a single superclass; throws IndexError.
    void validate() const;
};

/// Reads `image,mask,superclass,subclass` rows (header required). Relative paths resolve
/// against the CSV's directory. With `check_masks`, every mask PNG must exist and be nonempty.
BenchmarkIndex load_benchmark_csv(const std::filesystem::path& csv, bool check_masks = true);

void write_benchmark_csv(const std::filesystem::path& csv, const BenchmarkIndex& index);

enum class Gallery { Superclass, All };

struct Top1Result {
    std::map<std::string, double> per_subclass;
    double mean = 0;  // unweighted over subclasses
    std::size_t queries = 0;
};

/// Leave-one-out nearest-neighbour retrieval by cosine similarity over unit descriptors
/// (descriptors[i] belongs to entries[i]). A query is correct when its nearest gallery
/// image shares its subclass; exact ties go to the lowest index.
Top1Result top1(const BenchmarkIndex& index, const std::vector<std::vector<float>>& descriptors, Gallery gallery);

inline Top1Result top1_subclass(const BenchmarkIndex& index, const std::vector<std::vector<float>>& d) {
    return top1(index, d, Gallery::Superclass);
}
inline Top1Result top1_all(const BenchmarkIndex& index, const std::vector<std::vector<float>>& d) {
    return top1(index, d, Gallery::All);
}

/// Expected Top-1 of a descriptor whose nearest neighbour is uniform over the gallery.
Top1Result expected_random_top1(const BenchmarkIndex& index, Gallery gallery);

/// Horizontal bar chart of per-subclass accuracies as an RGB PNG.
void write_accuracy_chart(const std::filesystem::path& path, const Top1Result& result);

}  // namespace matforge::evalbench
