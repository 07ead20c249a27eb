// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "matforge/simloss/loss.hpp"

namespace matforge::dataset {

/// Seed of batch b in a run: derive_seed(derive_seed(seed, "batch"), b).
std::uint64_t batch_seed(std::uint64_t run_seed, std::uint64_t b);

/// One sampled batch, as shared with external trainers.
struct BatchFixture {
    std::uint64_t batch_seed = 0;
    std::vector<simloss::ImageLabel> images;
};

/// {"batch_seed", "set_id", "images": [{"image_ref", "scene", "ratio"}, ...]}; no trailing newline.
std::string fixture_line(const BatchFixture& fixture);
/// Throws ParseError or ValidationError.
BatchFixture parse_fixture_line(std::string_view line, std::string_view origin = "batches.jsonl");
std::vector<BatchFixture> parse_fixture_file(std::string_view text, std::string_view origin = "batches.jsonl");

/// {"batch_seed", "mean_loss", "gated_fraction"}; no trailing newline.
std::string loss_report_line(std::uint64_t batch_seed, const simloss::BatchLoss& loss);

}  // namespace matforge::dataset
