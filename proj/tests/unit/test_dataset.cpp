// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstring>
#include <fstream>
#include <set>

#include "helpers.hpp"
#include "matforge/core/error.hpp"
#include "matforge/core/image_io.hpp"
#include "matforge/dataset/batches.hpp"
#include "matforge/dataset/dataset.hpp"
#include "matforge/dataset/descriptor_file.hpp"
#include "matforge/dataset/json_util.hpp"
#include "matforge/dataset/manifest.hpp"
#include "matforge/dataset/pipeline.hpp"

namespace fs = std::filesystem;
using namespace matforge;
using namespace matforge::dataset;

namespace {

GenOptions tiny_options(std::uint64_t count) {
    GenOptions o;
    o.seed = 3;
    o.count = count;
    o.width = o.height = 16;
    o.samples_per_pixel = 1;
    o.max_bounces = 2;
    return o;
}

// Three rendered sets, built once and shared read-only.
const fs::path& shared_dataset() {
    static testing::TempDir dir("dataset");
    static bool built = false;
    if (!built) {
        generate_dataset(dir.path(), tiny_options(3));
        built = true;
    }
    return dir.path();
}

fs::path copy_of_shared(const testing::TempDir& into) {
    fs::copy(shared_dataset(), into.path() / "data", fs::copy_options::recursive);
    return into.path() / "data";
}

std::string slurp(const fs::path& p) { return read_text_file(p); }

std::vector<simloss::Descriptor> random_descriptors(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<simloss::Descriptor> out;
    for (int i = 0; i < n; ++i) {
        simloss::Descriptor d;
        d.image_ref = "set_000000/scene_" + std::to_string(i) + "/img_r050.png";
        d.values.resize(simloss::kDescriptorDim);
        for (auto& v : d.values) v = rng.uniform() * 2 - 1;
        simloss::l2_normalize(d.values);
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace

TEST_SUITE("dataset") {
    TEST_CASE("file naming") {
        CHECK(image_file_name(0.25) == "img_r025.png");
        CHECK(image_file_name(1.0, ".hdr") == "img_r100.hdr");
        CHECK(scene_dir_name(4) == "scene_4");
        CHECK(set_id_for(42) == "000042");
        CHECK(set_dir_name("000042") == "set_000042");
        CHECK(image_ref("000001", 2, 0.75) == "set_000001/scene_2/img_r075.png");
        CHECK(mask_ref("000001", 2) == "set_000001/scene_2/mask.png");
        CHECK(batch_seed(5, 0) == derive_seed(derive_seed(5, "batch"), 0));
    }

    TEST_CASE("written sets have the full inventory") {
        const auto& root = shared_dataset();
        auto index = index_dataset(root);
        CHECK(index.ok());
        REQUIRE(index.sets.size() == 3);
        for (const auto& s : index.sets) {
            int png = 0, json = 0, other = 0;
            for (const auto& e : fs::recursive_directory_iterator(s.dir)) {
                if (!e.is_regular_file()) continue;
                auto ext = e.path().extension();
                (ext == ".png" ? png : ext == ".json" ? json : other)++;
            }
            CHECK(png == 36);
            CHECK(json == 1);
            CHECK(other == 0);
            CHECK(s.width == 16);
            CHECK(fs::exists(root / (set_dir_name(s.manifest.set_id) + ".stats.json")));
            auto mask = read_mask(s.dir / "scene_0" / "mask.png");
            CHECK(mask.any());
        }
        CHECK(index.find("000001") != nullptr);
        CHECK(index.find("999999") == nullptr);
        auto sampling = sets_for_sampling(index);
        REQUIRE(sampling.size() == 3);
        CHECK(sampling[0].images.size() == 30);
        CHECK(sampling[1].images[7].image_ref == image_ref("000001", 1, 0.5));
    }

    TEST_CASE("manifest json round trip is byte stable") {
        auto text = slurp(shared_dataset() / "set_000000" / "metadata.json");
        auto m = manifest_from_json(text);
        CHECK(manifest_to_json(m) == text);
        CHECK(manifest_from_json(manifest_to_json(m)) == m);
        REQUIRE(m.source.has_value());
        CHECK(m.source->set_index == 0);
        CHECK(m.source->width == 16);
    }

    TEST_CASE("manifest errors") {
        auto text = slurp(shared_dataset() / "set_000000" / "metadata.json");
        auto v2 = text;
        v2.replace(v2.find("\"1.0\""), 5, "\"2.0\"");
        CHECK_THROWS_AS(manifest_from_json(v2), SchemaVersionError);
        auto v11 = text;
        v11.replace(v11.find("\"1.0\""), 5, "\"1.1\"");
        CHECK_NOTHROW(manifest_from_json(v11));

        auto broken = text.substr(0, text.size() / 2);
        try {
            manifest_from_json(broken, "x/metadata.json");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            std::string msg = e.what();
            CHECK(msg.find("x/metadata.json:") != std::string::npos);
            CHECK(msg.find(':', msg.find("json:") + 5) != std::string::npos);  // line:col
        }

        auto m = manifest_from_json(text);
        auto bad = m;
        bad.scenes[2].images[1].ratio = 0.3;
        CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("scene 2"), ValidationError);
        bad = m;
        bad.scenes[1].mask = "other.png";
        CHECK_THROWS_AS(bad.validate(), ValidationError);
        bad = m;
        bad.material_b.kind = bad.material_a.kind == "uniform" ? "textured" : "uniform";
        CHECK_THROWS_AS(bad.validate(), ValidationError);
    }

    TEST_CASE("write_set rejects incomplete renders") {
        testing::TempDir dir("incomplete");
        auto src = validate_set(shared_dataset() / "set_000000");
        auto source = *src.manifest.source;
        auto set = regenerate_set(source, generation_config(source));
        render::RenderSettings rs = render_settings(source, 1);
        auto rendered = render::render_set(set, rs);
        auto broken = rendered;
        broken.images[3][2].image_srgb = Image8();
        CHECK_THROWS_AS(write_set(dir.path(), src.manifest, broken), IncompleteSetError);
        broken = rendered;
        broken.masks[1] = Mask(16, 16);
        CHECK_THROWS_AS(write_set(dir.path(), src.manifest, broken), IncompleteSetError);
        CHECK_FALSE(fs::exists(dir.path() / "set_000000"));

        WriteOptions linear;
        linear.keep_linear = true;
        auto out = write_set(dir.path(), src.manifest, rendered, linear);
        CHECK(fs::exists(out / "scene_0" / "img_r025.hdr"));
        CHECK_NOTHROW(validate_set(out));
        CHECK(slurp(out / "scene_2" / "img_r050.png") == slurp(src.dir / "scene_2" / "img_r050.png"));
    }

    TEST_CASE("index reports damaged sets") {
        testing::TempDir dir("damaged");
        auto root = copy_of_shared(dir);
        fs::remove(root / "set_000001" / "scene_3" / "mask.png");
        fs::create_directory(root / ".tmp_set_000009");
        fs::create_directory(root / "notes");
        auto index = index_dataset(root);
        CHECK(index.sets.size() == 2);
        REQUIRE(index.problems.size() == 3);
        std::set<std::string> names;
        for (const auto& p : index.problems) names.insert(p.path.filename().string());
        CHECK(names == std::set<std::string>{"set_000001", ".tmp_set_000009", "notes"});
        CHECK_THROWS_WITH_AS(validate_set(root / "set_000001"), doctest::Contains("scene 3"), IncompleteSetError);

        std::ofstream(root / "set_000002" / "metadata.json") << "{\"schema_version\": ";
        CHECK_THROWS_AS(validate_set(root / "set_000002"), ParseError);
        write_png(root / "set_000000" / "scene_0" / "mask.png", Mask(16, 16));
        CHECK_THROWS_AS(validate_set(root / "set_000000"), IncompleteSetError);
    }

    TEST_CASE("empty and missing roots") {
        testing::TempDir dir("empty");
        CHECK_THROWS_AS(index_dataset(dir.path()), EmptyDatasetError);
        CHECK_THROWS_AS(index_dataset(dir.path() / "nope"), IoError);
    }

    TEST_CASE("descriptor files round trip exactly") {
        auto d = random_descriptors(5, 17);
        d[2].values[3] = 1e-38f;  // subnormal-adjacent values keep their bits
        simloss::l2_normalize(d[2].values);
        testing::TempDir dir("desc");
        for (const char* name : {"d.jsonl", "d.desc.bin"}) {
            write_descriptor_file(dir.path() / name, d);
            auto back = read_descriptor_file(dir.path() / name);
            REQUIRE(back.size() == d.size());
            for (std::size_t i = 0; i < d.size(); ++i) {
                CHECK(back.entries()[i].image_ref == d[i].image_ref);
                CHECK(std::memcmp(back.entries()[i].values.data(), d[i].values.data(), d[i].values.size() * 4) == 0);
            }
            CHECK(back.find(d[4].image_ref) != nullptr);
            CHECK(back.find("absent") == nullptr);
            CHECK_THROWS_AS(back.at("absent"), ValidationError);
        }
        auto bin = descriptor_binary(d);
        CHECK(bin.substr(0, 8) == "MFDESC01");
        CHECK(bin.size() == 16 + 5 * 512 * 4 + [&] {
                  std::size_t s = 0;
                  for (const auto& e : d) s += e.image_ref.size() + 1;
                  return s;
              }());
        CHECK_THROWS_AS(parse_descriptor_binary(bin.substr(0, 100)), ParseError);
        CHECK_THROWS_AS(parse_descriptor_binary("MFDESC02" + bin.substr(8)), ParseError);
    }

    TEST_CASE("descriptor file validation") {
        auto d = random_descriptors(3, 5);
        auto dup = d;
        dup[2].image_ref = dup[0].image_ref;
        CHECK_THROWS_AS(DescriptorFile{dup}, ValidationError);
        auto unnorm = d;
        unnorm[1].values[0] += 0.5f;
        CHECK_THROWS_AS(DescriptorFile{unnorm}, NormError);
        auto short_dim = d;
        short_dim[0].values.resize(100);
        CHECK_THROWS_AS(DescriptorFile{short_dim}, NormError);

        auto text = descriptor_jsonl(d);
        CHECK(std::count(text.begin(), text.end(), '\n') == 3);
        auto line2 = text.find('\n') + 1;
        auto bad = text.substr(0, line2) + "{\"image_ref\": 3}\n";
        CHECK_THROWS_WITH_AS(parse_descriptor_jsonl(bad, "f.jsonl"), doctest::Contains("f.jsonl:2"), ValidationError);
        CHECK_THROWS_AS(parse_descriptor_jsonl("not json\n"), ParseError);
    }

    TEST_CASE("batch fixtures and loss reports") {
        BatchFixture f;
        f.batch_seed = 18446744073709551557ull;
        for (int i = 0; i < 3; ++i) f.images.push_back({image_ref("000004", i, 0.25 * i), "000004", i, 0.25 * i});
        auto line = fixture_line(f);
        CHECK(line.find('\n') == std::string::npos);
        auto back = parse_fixture_line(line);
        CHECK(back.batch_seed == f.batch_seed);
        REQUIRE(back.images.size() == 3);
        for (int i = 0; i < 3; ++i) {
            CHECK(back.images[i].image_ref == f.images[i].image_ref);
            CHECK(back.images[i].set_id == "000004");
            CHECK(back.images[i].scene_index == i);
            CHECK(back.images[i].ratio == f.images[i].ratio);
        }
        auto many = parse_fixture_file(line + "\n\n" + line + "\n");
        CHECK(many.size() == 2);
        CHECK_THROWS_AS(parse_fixture_line("{\"batch_seed\": 1}"), ValidationError);
        CHECK_THROWS_AS(parse_fixture_line("{"), ParseError);

        simloss::BatchLoss loss;
        loss.mean_loss = 0.5;
        loss.gated_fraction = 0.25;
        auto report = Json::parse(loss_report_line(7, loss));
        CHECK(report.at("batch_seed").get<std::uint64_t>() == 7);
        CHECK(report.at("mean_loss").get<double>() == 0.5);
        CHECK(report.at("gated_fraction").get<double>() == 0.25);
        CHECK(report.size() == 3);
    }

    TEST_CASE("rerender reproduces a set") {
        testing::TempDir dir("rerender");
        auto src = validate_set(shared_dataset() / "set_000002");
        auto out = rerender_set(src.manifest, dir.path());
        for (int k = 0; k < 6; ++k)
            for (const char* f : {"img_r000.png", "img_r075.png", "mask.png"})
                CHECK(slurp(out / scene_dir_name(k) / f) == slurp(src.dir / scene_dir_name(k) / f));
        CHECK(slurp(out / "metadata.json") == slurp(src.dir / "metadata.json"));

        auto tampered = src.manifest;
        tampered.scenes[0].camera.vfov_deg += 1;
        CHECK_THROWS_AS(rerender_set(tampered, dir.path()), ValidationError);
        auto no_source = src.manifest;
        no_source.source.reset();
        CHECK_THROWS_AS(rerender_set(no_source, dir.path()), ValidationError);

        auto bigger = *src.manifest.source;
        bigger.width = bigger.height = 24;
        auto resized = rerender_set(src.manifest, dir.path() / "big", bigger);
        CHECK(validate_set(resized).width == 24);
    }

    TEST_CASE("generation is independent of thread count") {
        testing::TempDir a("threads_a"), b("threads_b");
        auto o = tiny_options(2);
        o.threads = 1;
        generate_dataset(a.path(), o);
        o.threads = 3;
        generate_dataset(b.path(), o);
        for (const auto& e : fs::recursive_directory_iterator(a.path())) {
            if (!e.is_regular_file()) continue;
            auto rel = fs::relative(e.path(), a.path());
            REQUIRE(fs::exists(b.path() / rel));
            CHECK(slurp(e.path()) == slurp(b.path() / rel));
        }
    }
}
