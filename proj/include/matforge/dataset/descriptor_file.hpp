// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "matforge/simloss/loss.hpp"

namespace matforge::dataset {

/// Magic of the packed format; followed by u32 count and u32 dim (little endian).
inline constexpr std::string_view kDescriptorMagic = "MFDESC01";
inline constexpr std::string_view kBinaryDescriptorExtension = ".desc.bin";

/// Descriptors keyed by image reference.
class DescriptorFile {
public:
    DescriptorFile() = default;
    /// Validates every entry (dimension, norm) and uniqueness of refs; throws NormError or ValidationError.
    explicit DescriptorFile(std::vector<simloss::Descriptor> entries);

    const std::vector<simloss::Descriptor>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    /// Null when the ref is absent.
    const simloss::Descriptor* find(std::string_view image_ref) const;
    /// Throws ValidationError naming the missing ref.
    const simloss::Descriptor& at(std::string_view image_ref) const;

private:
    std::vector<simloss::Descriptor> entries_;
    std::unordered_map<std::string, std::size_t> by_ref_;
};

/// One JSON line per descriptor: {"image_ref": ..., "values": [512 floats]}.
std::string descriptor_jsonl(const std::vector<simloss::Descriptor>& entries);
DescriptorFile parse_descriptor_jsonl(std::string_view text, std::string_view origin = "descriptors.jsonl");

/// Header, count*dim float32 values, then one newline-terminated ref per descriptor.
std::string descriptor_binary(const std::vector<simloss::Descriptor>& entries);
DescriptorFile parse_descriptor_binary(std::string_view bytes, std::string_view origin = "descriptors.desc.bin");

/// Chooses the format from the extension (`.desc.bin` packed, anything else JSON lines).
void write_descriptor_file(const std::filesystem::path& path, const std::vector<simloss::Descriptor>& entries);
DescriptorFile read_descriptor_file(const std::filesystem::path& path);

}  // namespace matforge::dataset
