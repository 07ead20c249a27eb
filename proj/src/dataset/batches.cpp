// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/dataset/batches.hpp"

#include <fmt/format.h>

#include "matforge/core/error.hpp"
#include "matforge/core/rng.hpp"
#include "matforge/dataset/json_util.hpp"

namespace matforge::dataset {

std::uint64_t batch_seed(std::uint64_t run_seed, std::uint64_t b) {
    return derive_seed(derive_seed(run_seed, "batch"), b);
}

std::string fixture_line(const BatchFixture& fixture) {
    Json j;
    j["batch_seed"] = fixture.batch_seed;
    j["set_id"] = fixture.images.empty() ? std::string() : fixture.images.front().set_id;
    Json images = Json::array();
    for (const auto& im : fixture.images)
        images.push_back({{"image_ref", im.image_ref}, {"scene", im.scene_index}, {"ratio", im.ratio}});
    j["images"] = std::move(images);
    return j.dump();
}

BatchFixture parse_fixture_line(std::string_view line, std::string_view origin) {
    Json j = parse_json(line, origin);
    try {
        BatchFixture f;
        f.batch_seed = j.at("batch_seed").get<std::uint64_t>();
        std::string set_id = j.at("set_id").get<std::string>();
        for (const Json& im : j.at("images"))
            f.images.push_back({im.at("image_ref").get<std::string>(), set_id, im.at("scene").get<int>(),
                                im.at("ratio").get<double>()});
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(fmt::format("{}: {}", origin, e.what()));
    }
}

std::vector<BatchFixture> parse_fixture_file(std::string_view text, std::string_view origin) {
    std::vector<BatchFixture> out;
    std::size_t pos = 0, line_no = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        out.push_back(parse_fixture_line(line, fmt::format("{}:{}", origin, line_no)));
    }
    return out;
}

std::string loss_report_line(std::uint64_t seed, const simloss::BatchLoss& loss) {
    Json j;
    j["batch_seed"] = seed;
    j["mean_loss"] = loss.mean_loss;
    j["gated_fraction"] = loss.gated_fraction;
    return j.dump();
}

}  // namespace matforge::dataset
