// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: dataset generation, re-rendering, descriptors, loss, evaluation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "matforge/core/error.hpp"
#include "matforge/core/image_io.hpp"
#include "matforge/core/rng.hpp"
#include "matforge/dataset/batches.hpp"
#include "matforge/dataset/dataset.hpp"
#include "matforge/dataset/descriptor_file.hpp"
#include "matforge/dataset/json_util.hpp"
#include "matforge/dataset/pipeline.hpp"
#include "matforge/evalbench/augment.hpp"
#include "matforge/evalbench/benchmark.hpp"

namespace fs = std::filesystem;
using namespace matforge;
using dataset::Json;

namespace {

evalbench::AttentionMode attention_from(const std::string& s) { return evalbench::parse_attention(s); }

void add_render_flags(CLI::App* cmd, dataset::GenOptions& g) {
    cmd->add_option("--width", g.width, "Image width")->capture_default_str();
    cmd->add_option("--height", g.height, "Image height")->capture_default_str();
    cmd->add_option("--spp", g.samples_per_pixel, "Samples per pixel")->capture_default_str();
    cmd->add_option("--bounces", g.max_bounces, "Maximum path depth")->capture_default_str();
    cmd->add_option("--exposure", g.exposure, "Linear exposure before tonemapping")->capture_default_str();
    cmd->add_flag("--no-env-sampling{false}", g.env_sampling, "BSDF sampling only (reference mode)");
    cmd->add_flag("--keep-linear", g.write.keep_linear, "Also write linear .hdr images");
    cmd->add_flag("--timing", g.write.timing, "Record render times in the stats sidecar");
    cmd->add_option("--threads", g.threads, "Worker threads (0: MATSIM_THREADS or all cores)");
}

Json top1_json(const evalbench::Top1Result& r) {
    Json per = Json::object();
    for (const auto& [k, v] : r.per_subclass) per[k] = v;
    return Json{{"mean", r.mean}, {"queries", r.queries}, {"per_subclass", std::move(per)}};
}

int run_gen(const dataset::GenOptions& g, const std::string& out, bool quiet) {
    std::size_t total = g.count * procgen::kScenesPerSet * procgen::kImagesPerScene, done = 0;
    auto paths = dataset::generate_dataset(out, g, [&](const std::string& id, int scene, int image) {
        ++done;
        if (!quiet) fmt::print(stderr, "\rset {} scene {} image {}  [{}/{}]", id, scene, image, done, total);
    });
    if (!quiet) fmt::print(stderr, "\n");
    for (const auto& p : paths) fmt::print("{}\n", p.string());
    return 0;
}

int run_render_one(const std::string& manifest_path, const std::string& out, const dataset::GenOptions& g,
                   std::optional<std::uint64_t> render_seed, bool overrides) {
    auto manifest = dataset::manifest_from_json(dataset::read_text_file(manifest_path), manifest_path);
    std::optional<dataset::SourceRecord> ov;
    if (overrides || render_seed) {
        if (!manifest.source) throw ValidationError(fmt::format("{}: manifest has no source block", manifest_path));
        dataset::SourceRecord s = *manifest.source;
        if (overrides) {
            s.width = g.width;
            s.height = g.height;
            s.samples_per_pixel = g.samples_per_pixel;
            s.max_bounces = g.max_bounces;
            s.env_sampling = g.env_sampling;
            s.exposure = g.exposure;
        }
        if (render_seed) s.render_seed = *render_seed;
        ov = s;
    }
    fs::path p = dataset::rerender_set(manifest, out, ov, g.write, g.threads);
    fmt::print("{}\n", p.string());
    return 0;
}

int run_describe(const std::string& root, const std::string& csv, const std::string& out, const std::string& mode,
                 const evalbench::AttentionOptions& attention) {
    std::vector<simloss::Descriptor> d;
    if (!root.empty()) {
        auto index = dataset::index_dataset(root);
        if (!index.ok()) {
            for (const auto& p : index.problems) fmt::print(stderr, "{}: {}\n", p.path.string(), p.message);
            throw ValidationError(fmt::format("{}: {} invalid entries", root, index.problems.size()));
        }
        d = dataset::describe_dataset(index, attention_from(mode), attention);
    } else {
        auto index = evalbench::load_benchmark_csv(csv);
        index.validate();
        d = dataset::describe_benchmark(index, fs::path(csv).parent_path(), attention_from(mode), attention);
    }
    dataset::write_descriptor_file(out, d);
    fmt::print(stderr, "{} descriptors -> {}\n", d.size(), out);
    return 0;
}

struct LossArgs {
    std::string descriptors, root, out, dump_batches, fixture, triplets = "all";
    std::uint64_t seed = 0;
    int batches = 10;
    simloss::BatchOptions batch;
    double temperature = 0.2;
};

int run_loss(LossArgs& a) {
    auto desc = dataset::read_descriptor_file(a.descriptors);
    simloss::LossConfig config;
    config.temperature = a.temperature;
    if (a.triplets == "all") config.mode = simloss::TripletMode::AllTriples;
    else if (a.triplets == "chunked") config.mode = simloss::TripletMode::Chunked;
    else throw InvalidArgument(fmt::format("unknown triplet mode '{}' (all, chunked)", a.triplets));
    config.validate();

    std::vector<dataset::BatchFixture> batches;
    if (!a.fixture.empty()) {
        batches = dataset::parse_fixture_file(dataset::read_text_file(a.fixture), a.fixture);
    } else {
        if (a.root.empty()) throw InvalidArgument("loss needs --dataset or --fixture");
        auto index = dataset::index_dataset(a.root);
        if (!index.ok()) {
            for (const auto& p : index.problems) fmt::print(stderr, "{}: {}\n", p.path.string(), p.message);
            throw ValidationError(fmt::format("{}: {} invalid entries", a.root, index.problems.size()));
        }
        auto sets = dataset::sets_for_sampling(index);
        for (int b = 0; b < a.batches; ++b) {
            std::uint64_t s = dataset::batch_seed(a.seed, static_cast<std::uint64_t>(b));
            batches.push_back({s, simloss::sample_batch(sets, s, a.batch)});
        }
    }
    if (!a.dump_batches.empty()) {
        std::string text;
        for (const auto& b : batches) text += dataset::fixture_line(b) + "\n";
        dataset::write_text_atomic(a.dump_batches, text);
    }

    std::string report;
    double sum = 0;
    for (const auto& b : batches) {
        std::vector<simloss::Descriptor> d;
        for (const auto& im : b.images) d.push_back(desc.at(im.image_ref));
        auto loss = simloss::batch_loss(d, b.images, config);
        sum += loss.mean_loss;
        report += dataset::loss_report_line(b.batch_seed, loss) + "\n";
    }
    if (a.out.empty()) std::fputs(report.c_str(), stdout);
    else dataset::write_text_atomic(a.out, report);
    fmt::print(stderr, "{} batches, mean loss {:.6f}\n", batches.size(), batches.empty() ? 0.0 : sum / batches.size());
    return 0;
}

int run_eval(const std::string& csv, const std::string& descriptors, const std::string& mode,
             const evalbench::AttentionOptions& attention, const std::string& out, bool plots) {
    auto index = evalbench::load_benchmark_csv(csv);
    index.validate();
    fs::path base = fs::path(csv).parent_path();
    auto m = attention_from(mode);
    std::vector<std::vector<float>> vecs;
    if (descriptors.empty()) {
        for (auto& d : dataset::describe_benchmark(index, base, m, attention)) vecs.push_back(std::move(d.values));
    } else {
        auto file = dataset::read_descriptor_file(descriptors);
        for (const auto& e : index.entries) vecs.push_back(file.at(dataset::benchmark_ref(e, base)).values);
    }
    auto sub = evalbench::top1_subclass(index, vecs);
    auto all = evalbench::top1_all(index, vecs);
    Json j;
    j["preprocessing"] = std::string(evalbench::attention_name(m));
    j["descriptors"] = descriptors.empty() ? std::string("baseline") : descriptors;
    j["images"] = index.entries.size();
    j["top1_subclass"] = top1_json(sub);
    j["top1_all"] = top1_json(all);
    j["random_expected"] = {{"top1_subclass", evalbench::expected_random_top1(index, evalbench::Gallery::Superclass).mean},
                            {"top1_all", evalbench::expected_random_top1(index, evalbench::Gallery::All).mean}};
    fs::create_directories(out);
    dataset::write_text_atomic(fs::path(out) / "metrics.json", j.dump(2) + "\n");
    if (plots) {
        evalbench::write_accuracy_chart(fs::path(out) / "top1_subclass.png", sub);
        evalbench::write_accuracy_chart(fs::path(out) / "top1_all.png", all);
    }
    fmt::print("top1 subclass {:.4f}  all {:.4f}\n", sub.mean, all.mean);
    return 0;
}

int run_augment_preview(const std::string& image, const std::string& out, std::uint64_t seed, int count,
                        std::optional<double> p) {
    FloatImage img = dataset::load_rgb(image);
    evalbench::AugmentationConfig config;
    if (p) config.p_blur = config.p_brightness = config.p_desaturate = config.p_noise = *p;
    config.validate();
    fs::create_directories(out);
    std::string plans;
    for (int i = 0; i < count; ++i) {
        std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
        auto plan = evalbench::augment_plan(config, s);
        auto name = fmt::format("aug_{:03d}.png", i);
        write_png(fs::path(out) / name, from_unit_float(evalbench::apply_plan(img, plan)));
        Json j{{"file", name}, {"seed", s}};
        j["blur_sigma"] = plan.blur_sigma ? Json(*plan.blur_sigma) : Json(nullptr);
        j["brightness"] = plan.brightness ? Json(*plan.brightness) : Json(nullptr);
        j["desaturation"] = plan.desaturation ? Json(*plan.desaturation) : Json(nullptr);
        j["noise_stddev"] = plan.noise_stddev ? Json(*plan.noise_stddev) : Json(nullptr);
        plans += j.dump() + "\n";
    }
    dataset::write_text_atomic(fs::path(out) / "plans.jsonl", plans);
    return 0;
}

int run_validate(const std::string& root, const std::string& descriptors) {
    int status = 0;
    if (!root.empty()) {
        auto index = dataset::index_dataset(root);
        for (const auto& p : index.problems) fmt::print(stderr, "invalid: {}: {}\n", p.path.string(), p.message);
        fmt::print("{} valid sets, {} problems\n", index.sets.size(), index.problems.size());
        if (!index.ok()) status = 1;
    }
    if (!descriptors.empty()) {
        auto file = dataset::read_descriptor_file(descriptors);
        fmt::print("{} descriptors valid\n", file.size());
    }
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"matforge: synthetic material-similarity datasets, losses and retrieval evaluation"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    // gen
    dataset::GenOptions gen;
    std::string gen_out;
    bool quiet = false;
    auto* c_gen = app.add_subcommand("gen", "Generate and render sets");
    c_gen->add_option("--seed", gen.seed, "Run seed")->capture_default_str();
    c_gen->add_option("--start", gen.start, "First set index")->capture_default_str();
    c_gen->add_option("--count", gen.count, "Number of sets")->capture_default_str();
    c_gen->add_option("--vessel-prob", gen.vessel_probability, "Probability of a vessel set")->capture_default_str();
    c_gen->add_option("--textured-prob", gen.textured_probability, "Probability of textured materials");
    c_gen->add_option("--combine-prob", gen.combine_probability, "Probability of combining two textures")
        ->capture_default_str();
    c_gen->add_option("--max-background", gen.max_background_objects, "Maximum background objects per scene")
        ->capture_default_str();
    c_gen->add_option("--texture-dir", gen.texture_dir, "Directory of PBR texture folders")->check(CLI::ExistingDirectory);
    c_gen->add_option("--hdri-dir", gen.hdri_dir, "Directory of .hdr environment maps")->check(CLI::ExistingDirectory);
    c_gen->add_option("--sky-count", gen.sky_count, "Procedural skies when no HDRI directory is given")
        ->capture_default_str();
    c_gen->add_option("--out", gen_out, "Dataset root")->required();
    c_gen->add_flag("--dump-geometry", gen.dump_geometry, "Write scene meshes as OBJ");
    c_gen->add_flag("--quiet", quiet, "No progress output");
    add_render_flags(c_gen, gen);

    // render-one
    dataset::GenOptions ro;
    std::string ro_manifest, ro_out;
    std::optional<std::uint64_t> ro_seed;
    auto* c_ro = app.add_subcommand("render-one", "Re-render a set from its metadata.json");
    c_ro->add_option("manifest", ro_manifest, "metadata.json of the set")->required()->check(CLI::ExistingFile);
    c_ro->add_option("--out", ro_out, "Output dataset root")->required();
    c_ro->add_option("--seed", ro_seed, "Render seed override");
    add_render_flags(c_ro, ro);

    // describe
    std::string d_root, d_csv, d_out, d_mode = "none";
    evalbench::AttentionOptions d_att;
    auto* c_d = app.add_subcommand("describe", "Baseline descriptors for a dataset or benchmark");
    auto* o_root = c_d->add_option("--dataset", d_root, "Dataset root")->check(CLI::ExistingDirectory);
    auto* o_csv = c_d->add_option("--benchmark", d_csv, "Benchmark CSV")->check(CLI::ExistingFile);
    o_root->excludes(o_csv);
    c_d->add_option("--out", d_out, "Descriptor file (.jsonl or .desc.bin)")->required();
    c_d->add_option("--mode", d_mode, "Attention: none, crop, mask, crop+mask")->capture_default_str();
    c_d->add_option("--crop-pad", d_att.crop_pad, "Crop margin fraction")->capture_default_str();
    c_d->add_option("--size", d_att.output_size, "Crop output size")->capture_default_str();
    c_d->add_flag("--keep-size", d_att.keep_size, "Do not resample crops");

    // loss
    LossArgs la;
    bool no_parity = false;
    auto* c_l = app.add_subcommand("loss", "Batch-loss report over seeded batches");
    c_l->add_option("--descriptors", la.descriptors, "Descriptor file")->required()->check(CLI::ExistingFile);
    c_l->add_option("--dataset", la.root, "Dataset root")->check(CLI::ExistingDirectory);
    c_l->add_option("--fixture", la.fixture, "Batch fixture to replay instead of sampling")->check(CLI::ExistingFile);
    c_l->add_option("--batches", la.batches, "Number of batches")->capture_default_str();
    c_l->add_option("--batch-size", la.batch.size, "Images per batch")->capture_default_str();
    c_l->add_option("--seed", la.seed, "Run seed")->capture_default_str();
    c_l->add_option("--triplets", la.triplets, "Triplet enumeration: all, chunked")->capture_default_str();
    c_l->add_option("--temperature", la.temperature, "Softmax temperature")->capture_default_str();
    c_l->add_flag("--no-parity", no_parity, "Pick sets uniformly instead of balancing vessel sets");
    c_l->add_option("--dump-batches", la.dump_batches, "Write the sampled batches as a fixture file");
    c_l->add_option("--out", la.out, "Report file (default stdout)");

    // eval
    std::string e_csv, e_desc, e_mode = "none", e_out;
    bool no_plots = false;
    evalbench::AttentionOptions e_att;
    auto* c_e = app.add_subcommand("eval", "One-shot Top-1 evaluation on a benchmark");
    c_e->add_option("--benchmark", e_csv, "Benchmark CSV")->required()->check(CLI::ExistingFile);
    c_e->add_option("--descriptors", e_desc, "Descriptor file (default: baseline descriptors)")
        ->check(CLI::ExistingFile);
    c_e->add_option("--mode", e_mode, "Attention: none, crop, mask, crop+mask")->capture_default_str();
    c_e->add_option("--crop-pad", e_att.crop_pad, "Crop margin fraction")->capture_default_str();
    c_e->add_option("--size", e_att.output_size, "Crop output size")->capture_default_str();
    c_e->add_flag("--keep-size", e_att.keep_size, "Do not resample crops");
    c_e->add_option("--out", e_out, "Output directory")->required();
    c_e->add_flag("--no-plots", no_plots, "Skip the PNG charts");

    // augment-preview
    std::string a_image, a_out;
    std::uint64_t a_seed = 0;
    int a_count = 8;
    std::optional<double> a_p;
    auto* c_a = app.add_subcommand("augment-preview", "Write augmented variants of an image");
    c_a->add_option("--image", a_image, "Input PNG")->required()->check(CLI::ExistingFile);
    c_a->add_option("--out", a_out, "Output directory")->required();
    c_a->add_option("--seed", a_seed, "Seed")->capture_default_str();
    c_a->add_option("--count", a_count, "Variants")->capture_default_str()->check(CLI::Range(1, 10000));
    c_a->add_option("--p", a_p, "Override every augmentation probability")->check(CLI::Range(0.0, 1.0));

    // validate
    std::string v_root, v_desc;
    auto* c_v = app.add_subcommand("validate", "Validate a dataset root and/or a descriptor file");
    c_v->add_option("root", v_root, "Dataset root")->check(CLI::ExistingDirectory);
    c_v->add_option("--descriptors", v_desc, "Descriptor file")->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_gen->parsed()) return run_gen(gen, gen_out, quiet);
        if (c_ro->parsed()) {
            bool overrides = false;
            for (const char* f : {"--width", "--height", "--spp", "--bounces", "--exposure", "--no-env-sampling"})
                overrides = overrides || c_ro->count(f) > 0;
            if (overrides) {
                // Unspecified render fields keep the manifest's values.
                auto m = dataset::manifest_from_json(dataset::read_text_file(ro_manifest), ro_manifest);
                if (m.source) {
                    if (!c_ro->count("--width")) ro.width = m.source->width;
                    if (!c_ro->count("--height")) ro.height = m.source->height;
                    if (!c_ro->count("--spp")) ro.samples_per_pixel = m.source->samples_per_pixel;
                    if (!c_ro->count("--bounces")) ro.max_bounces = m.source->max_bounces;
                    if (!c_ro->count("--exposure")) ro.exposure = m.source->exposure;
                    if (!c_ro->count("--no-env-sampling")) ro.env_sampling = m.source->env_sampling;
                }
            }
            return run_render_one(ro_manifest, ro_out, ro, ro_seed, overrides);
        }
        if (c_d->parsed()) {
            if (d_root.empty() == d_csv.empty()) throw InvalidArgument("describe needs exactly one of --dataset, --benchmark");
            return run_describe(d_root, d_csv, d_out, d_mode, d_att);
        }
        if (c_l->parsed()) {
            la.batch.vessel_parity = !no_parity;
            return run_loss(la);
        }
        if (c_e->parsed()) return run_eval(e_csv, e_desc, e_mode, e_att, e_out, !no_plots);
        if (c_a->parsed()) return run_augment_preview(a_image, a_out, a_seed, a_count, a_p);
        if (c_v->parsed()) {
            if (v_root.empty() && v_desc.empty()) throw InvalidArgument("validate needs a dataset root or --descriptors");
            return run_validate(v_root, v_desc);
        }
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 1;
}
