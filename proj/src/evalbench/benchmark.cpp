// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/evalbench/benchmark.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "matforge/core/error.hpp"
#include "matforge/core/image_io.hpp"
#include "matforge/simd/kernels.hpp"

namespace matforge::evalbench {

namespace {

// One CSV record; double quotes may wrap fields and escape themselves.
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

}  // namespace

void BenchmarkIndex::validate() const {
    std::map<std::string, std::size_t> sizes;
    std::map<std::string, std::string> parent;
    for (const auto& e : entries) {
        ++sizes[e.subclass];
        auto [it, inserted] = parent.try_emplace(e.subclass, e.superclass);
        if (!inserted && it->second != e.superclass)
            throw IndexError(fmt::format("subclass '{}' appears under superclasses '{}' and '{}'", e.subclass,
                                         it->second, e.superclass));
    }
    for (const auto& [name, n] : sizes)
        if (n < 2) throw IndexError(fmt::format("subclass '{}' has {} image; at least 2 are required", name, n));
}

BenchmarkIndex load_benchmark_csv(const std::filesystem::path& csv, bool check_masks) {
    std::ifstream in(csv);
    if (!in) throw IoError("cannot open benchmark index " + csv.string());
    const auto base = csv.parent_path();
    std::string line;
    if (!std::getline(in, line)) throw IndexError(csv.string() + ": empty file");
    auto header = split_csv(line);
    if (header != std::vector<std::string>{"image", "mask", "superclass", "subclass"})
        throw IndexError(csv.string() + ": header must be image,mask,superclass,subclass");
    BenchmarkIndex index;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto f = split_csv(line);
        if (f.size() != 4) throw IndexError(fmt::format("{}:{}: expected 4 fields, got {}", csv.string(), line_no, f.size()));
        BenchmarkEntry e{f[0], f[1], f[2], f[3]};
        if (e.image.is_relative()) e.image = base / e.image;
        if (e.mask.is_relative()) e.mask = base / e.mask;
        if (check_masks) {
            Image8 m = read_png8(e.mask);
            if (std::all_of(m.data.begin(), m.data.end(), [](std::uint8_t v) { return v == 0; }))
                throw IndexError(fmt::format("{}:{}: mask {} is empty", csv.string(), line_no, e.mask.string()));
        }
        index.entries.push_back(std::move(e));
    }
    index.validate();
    return index;
}

void write_benchmark_csv(const std::filesystem::path& csv, const BenchmarkIndex& index) {
    std::ofstream out(csv, std::ios::binary);
    if (!out) throw IoError("cannot write " + csv.string());
    const auto base = csv.parent_path();
    out << "image,mask,superclass,subclass\n";
    for (const auto& e : index.entries) {
        auto rel = [&](const std::filesystem::path& p) { return p.lexically_relative(base).generic_string(); };
        out << csv_field(rel(e.image)) << ',' << csv_field(rel(e.mask)) << ',' << csv_field(e.superclass) << ','
            << csv_field(e.subclass) << '\n';
    }
}

namespace {

Top1Result summarize(const BenchmarkIndex& index, const std::vector<double>& per_query) {
    std::map<std::string, std::pair<double, std::size_t>> acc;
    for (std::size_t q = 0; q < per_query.size(); ++q) {
        auto& a = acc[index.entries[q].subclass];
        a.first += per_query[q];
        a.second += 1;
    }
    Top1Result r;
    r.queries = per_query.size();
    for (const auto& [name, a] : acc) r.per_subclass[name] = a.first / static_cast<double>(a.second);
    double sum = 0;
    for (const auto& [name, v] : r.per_subclass) sum += v;
    r.mean = r.per_subclass.empty() ? 0.0 : sum / static_cast<double>(r.per_subclass.size());
    return r;
}

}  // namespace

Top1Result top1(const BenchmarkIndex& index, const std::vector<std::vector<float>>& descriptors, Gallery gallery) {
    const std::size_t n = index.entries.size();
    if (descriptors.size() != n) throw InvalidArgument("top1: one descriptor per index entry required");
    std::vector<double> correct(n, 0.0);
    for (std::size_t q = 0; q < n; ++q) {
        double best = -1e300;
        std::size_t best_i = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == q) continue;
            if (gallery == Gallery::Superclass && index.entries[i].superclass != index.entries[q].superclass) continue;
            double s = simd::dot(descriptors[q], descriptors[i]);
            if (s > best) {
                best = s;
                best_i = i;
            }
        }
        if (best_i < n && index.entries[best_i].subclass == index.entries[q].subclass) correct[q] = 1.0;
    }
    return summarize(index, correct);
}

Top1Result expected_random_top1(const BenchmarkIndex& index, Gallery gallery) {
    std::map<std::string, std::size_t> sub_n, super_n;
    for (const auto& e : index.entries) {
        ++sub_n[e.subclass];
        ++super_n[e.superclass];
    }
    const std::size_t n = index.entries.size();
    std::vector<double> expected(n);
    for (std::size_t q = 0; q < n; ++q) {
        const auto& e = index.entries[q];
        double same = static_cast<double>(sub_n[e.subclass] - 1);
        double pool = static_cast<double>((gallery == Gallery::Superclass ? super_n[e.superclass] : n) - 1);
        expected[q] = pool > 0 ? same / pool : 0.0;
    }
    return summarize(index, expected);
}

void write_accuracy_chart(const std::filesystem::path& path, const Top1Result& result) {
    const int bar_h = 6, gap = 2, width = 400, margin = 10;
    const int rows = std::max<int>(1, static_cast<int>(result.per_subclass.size()));
    const int height = 2 * margin + rows * (bar_h + gap) + 4;
    Image8 img(width, height, 3);
    std::fill(img.data.begin(), img.data.end(), std::uint8_t{255});
    auto put = [&](int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
        img.data[i] = r;
        img.data[i + 1] = g;
        img.data[i + 2] = b;
    };
    const int span = width - 2 * margin;
    int row = 0;
    for (const auto& [name, v] : result.per_subclass) {
        int y0 = margin + row * (bar_h + gap);
        int len = static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * span));
        for (int y = y0; y < y0 + bar_h; ++y)
            for (int x = margin; x < margin + len; ++x) put(x, y, 70, 110, 180);
        ++row;
    }
    // mean marker
    int mx = margin + static_cast<int>(std::lround(std::clamp(result.mean, 0.0, 1.0) * span));
    for (int y = margin / 2; y < height - margin / 2; ++y) put(std::min(mx, width - 1), y, 200, 40, 40);
    write_png(path, img);
}

}  // namespace matforge::evalbench
