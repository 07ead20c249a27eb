// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace matforge::dataset {

using Json = nlohmann::ordered_json;

/// 1-based line and column of a byte offset in `text`.
struct TextPosition {
    std::size_t line = 1, column = 1;
};
TextPosition position_of(std::string_view text, std::size_t offset);

/// Parses JSON; syntax errors become ParseError naming `origin`, line and column.
Json parse_json(std::string_view text, std::string_view origin);

std::string read_text_file(const std::filesystem::path& path);

/// Writes via a temporary sibling and rename so readers never see a partial file.
void write_text_atomic(const std::filesystem::path& path, std::string_view text);

}  // namespace matforge::dataset
