// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "matforge/core/rng.hpp"
#include "matforge/evalbench/benchmark.hpp"

namespace testing {

/// Index shaped like the real benchmark: 116 subclasses with 416 images
/// (20x2, 40x3, 36x4, 8x5, 12x6), grouped into superclasses of 2 to 4 subclasses.
/// Paths are placeholders.
inline matforge::evalbench::BenchmarkIndex set1_like_index() {
    std::vector<int> sizes;
    for (auto [count, n] : {std::pair{20, 2}, {40, 3}, {36, 4}, {8, 5}, {12, 6}})
        for (int i = 0; i < count; ++i) sizes.push_back(n);
    matforge::Rng rng(2024);
    for (std::size_t i = sizes.size() - 1; i > 0; --i)
        std::swap(sizes[i], sizes[rng.below(static_cast<std::uint32_t>(i + 1))]);

    matforge::evalbench::BenchmarkIndex index;
    const int groups[3] = {2, 3, 4};
    std::size_t sub = 0;
    for (int g = 0; sub < sizes.size(); ++g) {
        std::size_t take = std::min<std::size_t>(groups[g % 3], sizes.size() - sub);
        std::string super = "super" + std::to_string(g);
        for (std::size_t s = 0; s < take; ++s, ++sub) {
            std::string name = "sub" + std::to_string(sub);
            for (int k = 0; k < sizes[sub]; ++k) {
                std::string stem = name + "_" + std::to_string(k);
                index.entries.push_back({stem + ".png", stem + "_mask.png", super, name});
            }
        }
    }
    return index;
}

/// Random unit vectors; their nearest neighbours are uniform over any gallery.
inline std::vector<std::vector<float>> random_unit_descriptors(std::size_t n, int dim, std::uint64_t seed) {
    matforge::Rng rng(seed);
    std::vector<std::vector<float>> out(n, std::vector<float>(static_cast<std::size_t>(dim)));
    for (auto& d : out) {
        double s = 0;
        for (auto& v : d) {
            // Box-Muller keeps the direction isotropic
            double u1 = 1.0 - rng.uniform_double(), u2 = rng.uniform_double();
            v = static_cast<float>(std::sqrt(-2 * std::log(u1)) * std::cos(6.283185307179586 * u2));
            s += double(v) * v;
        }
        for (auto& v : d) v = static_cast<float>(v / std::sqrt(s));
    }
    return out;
}

}  // namespace testing
