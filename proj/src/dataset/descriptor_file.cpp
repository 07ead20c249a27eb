// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/dataset/descriptor_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <fmt/format.h>

#include "matforge/core/error.hpp"
#include "matforge/dataset/json_util.hpp"

namespace matforge::dataset {

DescriptorFile::DescriptorFile(std::vector<simloss::Descriptor> entries) : entries_(std::move(entries)) {
    by_ref_.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& d = entries_[i];
        if (d.image_ref.empty()) throw ValidationError(fmt::format("descriptor {} has an empty image_ref", i));
        if (d.image_ref.find('\n') != std::string::npos)
            throw ValidationError(fmt::format("descriptor {} image_ref contains a newline", i));
        try {
            d.validate();
        } catch (const NormError& e) {
            throw NormError(fmt::format("{}: {}", d.image_ref, e.what()));
        }
        if (!by_ref_.emplace(d.image_ref, i).second)
            throw ValidationError(fmt::format("duplicate image_ref {}", d.image_ref));
    }
}

const simloss::Descriptor* DescriptorFile::find(std::string_view image_ref) const {
    auto it = by_ref_.find(std::string(image_ref));
    return it == by_ref_.end() ? nullptr : &entries_[it->second];
}

const simloss::Descriptor& DescriptorFile::at(std::string_view image_ref) const {
    if (const auto* d = find(image_ref)) return *d;
    throw ValidationError(fmt::format("no descriptor for {}", image_ref));
}

// ---- JSON lines ----

std::string descriptor_jsonl(const std::vector<simloss::Descriptor>& entries) {
    DescriptorFile checked(entries);
    std::string out;
    for (const auto& d : entries) {
        out += R"({"image_ref":)";
        out += Json(d.image_ref).dump();
        out += R"(,"values":[)";
        for (std::size_t i = 0; i < d.values.size(); ++i) {
            if (i) out += ',';
            fmt::format_to(std::back_inserter(out), "{}", d.values[i]);  // shortest round-trip form
        }
        out += "]}\n";
    }
    return out;
}

DescriptorFile parse_descriptor_jsonl(std::string_view text, std::string_view origin) {
    std::vector<simloss::Descriptor> entries;
    std::size_t line_no = 0, pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        std::string where = fmt::format("{}:{}", origin, line_no);
        Json j = parse_json(line, where);
        try {
            simloss::Descriptor d;
            d.image_ref = j.at("image_ref").get<std::string>();
            const Json& v = j.at("values");
            if (!v.is_array()) throw ValidationError(fmt::format("{}: values must be an array", where));
            d.values.reserve(v.size());
            for (const Json& x : v) {
                if (!x.is_number()) throw ValidationError(fmt::format("{}: values must be numbers", where));
                d.values.push_back(x.get<float>());
            }
            entries.push_back(std::move(d));
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(fmt::format("{}: {}", where, e.what()));
        }
    }
    return DescriptorFile(std::move(entries));
}

// ---- packed ----

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(std::string_view b, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + i])) << (8 * i);
    return v;
}

}  // namespace

std::string descriptor_binary(const std::vector<simloss::Descriptor>& entries) {
    DescriptorFile checked(entries);
    std::string out(kDescriptorMagic);
    put_u32(out, static_cast<std::uint32_t>(entries.size()));
    put_u32(out, static_cast<std::uint32_t>(simloss::kDescriptorDim));
    out.reserve(out.size() + entries.size() * simloss::kDescriptorDim * 4);
    for (const auto& d : entries)
        for (float v : d.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
    for (const auto& d : entries) {
        out += d.image_ref;
        out += '\n';
    }
    return out;
}

DescriptorFile parse_descriptor_binary(std::string_view bytes, std::string_view origin) {
    constexpr std::size_t kHeader = 16;
    if (bytes.size() < kHeader || bytes.substr(0, kDescriptorMagic.size()) != kDescriptorMagic)
        throw ParseError(fmt::format("{}: not a packed descriptor file", origin));
    std::uint32_t count = get_u32(bytes, 8);
    std::uint32_t dim = get_u32(bytes, 12);
    if (dim != simloss::kDescriptorDim)
        throw ValidationError(fmt::format("{}: dimension {} (expected {})", origin, dim, simloss::kDescriptorDim));
    std::size_t values_end = kHeader + static_cast<std::size_t>(count) * dim * 4;
    if (bytes.size() < values_end) throw ParseError(fmt::format("{}: truncated values block", origin));
    std::vector<simloss::Descriptor> entries(count);
    std::size_t at = kHeader;
    for (auto& d : entries) {
        d.values.resize(dim);
        for (auto& v : d.values) {
            v = std::bit_cast<float>(get_u32(bytes, at));
            at += 4;
        }
    }
    std::string_view refs = bytes.substr(values_end);
    for (std::uint32_t i = 0; i < count; ++i) {
        std::size_t nl = refs.find('\n');
        if (nl == std::string_view::npos)
            throw ParseError(fmt::format("{}: expected {} refs, found {}", origin, count, i));
        entries[i].image_ref = std::string(refs.substr(0, nl));
        refs.remove_prefix(nl + 1);
    }
    if (!refs.empty()) throw ParseError(fmt::format("{}: trailing bytes after {} refs", origin, count));
    return DescriptorFile(std::move(entries));
}

namespace {

bool is_binary_path(const std::filesystem::path& p) {
    std::string name = p.filename().string();
    return name.size() >= kBinaryDescriptorExtension.size() && name.ends_with(kBinaryDescriptorExtension);
}

}  // namespace

void write_descriptor_file(const std::filesystem::path& path, const std::vector<simloss::Descriptor>& entries) {
    write_text_atomic(path, is_binary_path(path) ? descriptor_binary(entries) : descriptor_jsonl(entries));
}

DescriptorFile read_descriptor_file(const std::filesystem::path& path) {
    std::string bytes = read_text_file(path);
    return is_binary_path(path) ? parse_descriptor_binary(bytes, path.string())
                                : parse_descriptor_jsonl(bytes, path.string());
}

}  // namespace matforge::dataset
