// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/dataset/manifest.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "matforge/core/error.hpp"
#include "matforge/dataset/json_util.hpp"
#include "matforge/pbr/mixing.hpp"

namespace matforge::dataset {

std::string image_file_name(double ratio, std::string_view extension) {
    return fmt::format("img_r{:03d}{}", pbr::MixtureRatio(ratio).percent(), extension);
}

std::string scene_dir_name(int scene_index) { return fmt::format("scene_{}", scene_index); }

std::string set_dir_name(std::string_view set_id) { return fmt::format("set_{}", set_id); }

namespace {

std::array<float, 3> arr(Vec3 v) { return {v.x, v.y, v.z}; }

UvRecord uv_record(const procgen::UvTransform& t) { return {{t.offset.x, t.offset.y}, t.rotation, t.scale}; }

PlacementRecord placement_record(const procgen::ObjectPlacement& p) {
    PlacementRecord r{p.shape, p.shape_seed, {}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) r.transform[static_cast<std::size_t>(i * 4 + j)] = p.transform.m[i][j];
    return r;
}

}  // namespace

MaterialRecord material_record(const pbr::MaterialSpec& m) {
    MaterialRecord r;
    r.id = m.id;
    r.kind = m.kind == pbr::MaterialKind::Uniform ? "uniform" : "textured";
    r.ior = m.ior;
    if (auto* c = std::get_if<Vec3>(&m.base_color)) r.base_color = arr(*c);
    if (auto* v = std::get_if<float>(&m.roughness)) r.roughness = *v;
    if (auto* v = std::get_if<float>(&m.metallic)) r.metallic = *v;
    if (auto* v = std::get_if<float>(&m.transmission)) r.transmission = *v;
    return r;
}

SetManifest manifest_from_set(const procgen::SceneSet& set) {
    SetManifest m;
    m.set_id = set.set_id;
    m.material_a = material_record(set.material_a);
    m.material_b = material_record(set.material_b);
    m.vessel = set.vessel;
    m.ratios = set.ratios;
    for (int k = 0; k < procgen::kScenesPerSet; ++k) {
        const auto& sc = set.scenes[static_cast<std::size_t>(k)];
        SceneRecord& r = m.scenes[static_cast<std::size_t>(k)];
        r.index = k;
        r.policy = std::string(procgen::policy_name(sc.policy));
        r.camera = {arr(sc.camera.position), arr(sc.camera.look_at), sc.camera.vfov_deg};
        r.object = placement_record(sc.main_placement);
        if (sc.vessel) {
            VesselRecord v;
            v.linear_coeffs = sc.vessel->profile.linear_coeffs;
            for (const auto& t : sc.vessel->profile.trig_terms) v.trig_terms.push_back({t.amplitude, t.frequency, t.phase});
            v.r_min = sc.vessel->profile.r_min;
            v.height = sc.vessel->profile.height;
            v.stretch = {sc.vessel->profile.stretch.x, sc.vessel->profile.stretch.y};
            v.wall_thickness = sc.vessel->wall_thickness;
            v.content = sc.vessel->content == procgen::ContentKind::Fill ? "fill" : "object";
            v.fill_fraction = sc.vessel->fill_fraction;
            v.glass = material_record(sc.vessel->glass);
            r.vessel = v;
        }
        for (int i = 0; i < procgen::kImagesPerScene; ++i) {
            const auto& env = sc.lighting[static_cast<std::size_t>(i)];
            double ratio = set.ratios[static_cast<std::size_t>(i)];
            r.images[static_cast<std::size_t>(i)] = {ratio, image_file_name(ratio),
                                                     {env.id, env.rotation, env.intensity_scale},
                                                     uv_record(sc.uv[static_cast<std::size_t>(i)])};
        }
        r.ground_height = sc.ground.height;
        r.ground_material = material_record(sc.ground.material);
        r.ground_uv = uv_record(sc.ground.uv);
        for (const auto& b : sc.background_objects)
            r.background.push_back({placement_record(b.placement), material_record(b.material), uv_record(b.uv)});
    }
    return m;
}

void SetManifest::validate() const {
    auto fail = [&](const std::string& what) { throw ValidationError(fmt::format("set {}: {}", set_id, what)); };
    if (set_id.empty()) fail("empty set_id");
    for (std::size_t i = 0; i < ratios.size(); ++i)
        if (ratios[i] != pbr::set_ratios()[i]) fail("ratio schedule must be [0, 0.25, 0.5, 0.75, 1]");
    if (material_a.kind != material_b.kind) fail("materials A and B differ in kind");
    for (int k = 0; k < procgen::kScenesPerSet; ++k) {
        const SceneRecord& s = scenes[static_cast<std::size_t>(k)];
        auto sfail = [&](const std::string& what) { fail(fmt::format("scene {}: {}", k, what)); };
        if (s.index != k) sfail("index out of order");
        auto expected = procgen::policy_for_scene(k);
        if (s.policy != procgen::policy_name(expected))
            sfail(fmt::format("policy '{}' where '{}' is required", s.policy, procgen::policy_name(expected)));
        if (s.vessel.has_value() != vessel) sfail("vessel record disagrees with the set's vessel flag");
        if (s.mask != "mask.png") sfail("mask file must be mask.png");
        if (!(s.camera.vfov_deg > 0 && s.camera.vfov_deg < 180)) sfail("camera vfov out of range");
        for (int i = 0; i < procgen::kImagesPerScene; ++i) {
            const ImageRecord& im = s.images[static_cast<std::size_t>(i)];
            if (im.ratio != ratios[static_cast<std::size_t>(i)]) sfail(fmt::format("image {} ratio mismatch", i));
            if (im.file != image_file_name(im.ratio)) sfail(fmt::format("image {} file must be {}", i, image_file_name(im.ratio)));
            if (!(im.environment.intensity_scale > 0)) sfail(fmt::format("image {} intensity must be positive", i));
            const auto& e0 = s.images[0].environment;
            if (expected != procgen::BackgroundPolicy::ReplaceEnv && im.environment.id != e0.id)
                sfail(fmt::format("{} policy changes the environment at image {}", s.policy, i));
            if (expected == procgen::BackgroundPolicy::Fixed && im.environment.rotation != e0.rotation)
                sfail(fmt::format("fixed policy changes the environment rotation at image {}", i));
        }
    }
}

// ---- JSON ----

namespace {

Json to_json(const MaterialRecord& m) {
    Json j;
    j["id"] = m.id;
    j["kind"] = m.kind;
    if (m.base_color) j["base_color"] = *m.base_color;
    if (m.roughness) j["roughness"] = *m.roughness;
    if (m.metallic) j["metallic"] = *m.metallic;
    if (m.transmission) j["transmission"] = *m.transmission;
    j["ior"] = m.ior;
    return j;
}

Json to_json(const UvRecord& u) { return Json{{"offset", u.offset}, {"rotation", u.rotation}, {"scale", u.scale}}; }

Json to_json(const PlacementRecord& p) {
    return Json{{"shape", p.shape}, {"shape_seed", p.shape_seed}, {"transform", p.transform}};
}

MaterialRecord material_from(const Json& j) {
    MaterialRecord m;
    m.id = j.at("id").get<std::string>();
    m.kind = j.at("kind").get<std::string>();
    if (m.kind != "uniform" && m.kind != "textured") throw ValidationError("material kind must be uniform or textured");
    if (j.contains("base_color")) m.base_color = j.at("base_color").get<std::array<float, 3>>();
    if (j.contains("roughness")) m.roughness = j.at("roughness").get<float>();
    if (j.contains("metallic")) m.metallic = j.at("metallic").get<float>();
    if (j.contains("transmission")) m.transmission = j.at("transmission").get<float>();
    m.ior = j.at("ior").get<float>();
    if (m.kind == "uniform" && !(m.base_color && m.roughness && m.metallic && m.transmission))
        throw ValidationError(fmt::format("uniform material {} must list its property values", m.id));
    return m;
}

UvRecord uv_from(const Json& j) {
    return {j.at("offset").get<std::array<float, 2>>(), j.at("rotation").get<float>(), j.at("scale").get<float>()};
}

PlacementRecord placement_from(const Json& j) {
    return {j.at("shape").get<std::string>(), j.at("shape_seed").get<std::uint64_t>(),
            j.at("transform").get<std::array<float, 12>>()};
}

int schema_major(const std::string& v) {
    int major = -1;
    auto dot = v.find('.');
    auto head = v.substr(0, dot);
    auto [p, ec] = std::from_chars(head.data(), head.data() + head.size(), major);
    if (ec != std::errc() || p != head.data() + head.size() || head.empty())
        throw ValidationError(fmt::format("malformed schema_version '{}'", v));
    return major;
}

}  // namespace

std::string manifest_to_json(const SetManifest& m) {
    Json j;
    j["schema_version"] = m.schema_version;
    j["set_id"] = m.set_id;
    j["vessel"] = m.vessel;
    j["ratios"] = m.ratios;
    j["material_a"] = to_json(m.material_a);
    j["material_b"] = to_json(m.material_b);
    Json scenes = Json::array();
    for (const auto& s : m.scenes) {
        Json js;
        js["index"] = s.index;
        js["policy"] = s.policy;
        js["camera"] = {{"position", s.camera.position}, {"look_at", s.camera.look_at}, {"vfov_deg", s.camera.vfov_deg}};
        js["object"] = to_json(s.object);
        if (s.vessel) {
            const auto& v = *s.vessel;
            js["vessel"] = {{"profile",
                             {{"linear_coeffs", v.linear_coeffs},
                              {"trig_terms", v.trig_terms},
                              {"r_min", v.r_min},
                              {"height", v.height},
                              {"stretch", v.stretch}}},
                            {"wall_thickness", v.wall_thickness},
                            {"content", v.content},
                            {"fill_fraction", v.fill_fraction},
                            {"glass", to_json(v.glass)}};
        }
        Json images = Json::array();
        for (const auto& im : s.images)
            images.push_back({{"ratio", im.ratio},
                              {"file", im.file},
                              {"environment",
                               {{"id", im.environment.id},
                                {"rotation", im.environment.rotation},
                                {"intensity_scale", im.environment.intensity_scale}}},
                              {"uv", to_json(im.uv)}});
        js["images"] = images;
        js["mask"] = s.mask;
        js["ground"] = {{"height", s.ground_height}, {"material", to_json(s.ground_material)}, {"uv", to_json(s.ground_uv)}};
        Json bg = Json::array();
        for (const auto& b : s.background)
            bg.push_back({{"placement", to_json(b.placement)}, {"material", to_json(b.material)}, {"uv", to_json(b.uv)}});
        js["background_objects"] = bg;
        scenes.push_back(js);
    }
    j["scenes"] = scenes;
    if (m.source) {
        const auto& s = *m.source;
        j["source"] = {{"seed", s.seed},
                       {"set_index", s.set_index},
                       {"generation",
                        {{"vessel_probability", s.vessel_probability},
                         {"textured_probability", s.textured_probability},
                         {"combine_probability", s.combine_probability},
                         {"max_background_objects", s.max_background_objects},
                         {"texture_dir", s.texture_dir},
                         {"hdri_dir", s.hdri_dir},
                         {"sky_count", s.sky_count}}},
                       {"render",
                        {{"width", s.width},
                         {"height", s.height},
                         {"samples_per_pixel", s.samples_per_pixel},
                         {"max_bounces", s.max_bounces},
                         {"seed", s.render_seed},
                         {"env_sampling", s.env_sampling},
                         {"exposure", s.exposure}}}};
    }
    return j.dump(2) + "\n";
}

SetManifest manifest_from_json(std::string_view text, std::string_view origin) {
    Json j = parse_json(text, origin);
    SetManifest m;
    try {
        m.schema_version = j.at("schema_version").get<std::string>();
        int major = schema_major(m.schema_version);
        if (major > kSchemaMajor)
            throw SchemaVersionError(fmt::format("{}: schema version {} is newer than supported {}", origin,
                                                 m.schema_version, kSchemaVersion));
        m.set_id = j.at("set_id").get<std::string>();
        m.vessel = j.at("vessel").get<bool>();
        m.ratios = j.at("ratios").get<std::array<double, procgen::kImagesPerScene>>();
        m.material_a = material_from(j.at("material_a"));
        m.material_b = material_from(j.at("material_b"));
        const Json& scenes = j.at("scenes");
        if (!scenes.is_array() || scenes.size() != procgen::kScenesPerSet)
            throw ValidationError(fmt::format("expected {} scenes", procgen::kScenesPerSet));
        for (std::size_t k = 0; k < scenes.size(); ++k) {
            const Json& js = scenes[k];
            SceneRecord& s = m.scenes[k];
            s.index = js.at("index").get<int>();
            s.policy = js.at("policy").get<std::string>();
            const Json& cam = js.at("camera");
            s.camera = {cam.at("position").get<std::array<float, 3>>(), cam.at("look_at").get<std::array<float, 3>>(),
                        cam.at("vfov_deg").get<float>()};
            s.object = placement_from(js.at("object"));
            if (js.contains("vessel")) {
                const Json& jv = js.at("vessel");
                const Json& p = jv.at("profile");
                VesselRecord v;
                v.linear_coeffs = p.at("linear_coeffs").get<std::vector<float>>();
                v.trig_terms = p.at("trig_terms").get<std::vector<std::array<float, 3>>>();
                v.r_min = p.at("r_min").get<float>();
                v.height = p.at("height").get<float>();
                v.stretch = p.at("stretch").get<std::array<float, 2>>();
                v.wall_thickness = jv.at("wall_thickness").get<float>();
                v.content = jv.at("content").get<std::string>();
                v.fill_fraction = jv.at("fill_fraction").get<float>();
                v.glass = material_from(jv.at("glass"));
                s.vessel = v;
            }
            const Json& images = js.at("images");
            if (!images.is_array() || images.size() != procgen::kImagesPerScene)
                throw ValidationError(fmt::format("scene {}: expected {} images", k, procgen::kImagesPerScene));
            for (std::size_t i = 0; i < images.size(); ++i) {
                const Json& ji = images[i];
                const Json& je = ji.at("environment");
                s.images[i] = {ji.at("ratio").get<double>(), ji.at("file").get<std::string>(),
                               {je.at("id").get<std::string>(), je.at("rotation").get<float>(),
                                je.at("intensity_scale").get<float>()},
                               uv_from(ji.at("uv"))};
            }
            s.mask = js.at("mask").get<std::string>();
            const Json& g = js.at("ground");
            s.ground_height = g.at("height").get<float>();
            s.ground_material = material_from(g.at("material"));
            s.ground_uv = uv_from(g.at("uv"));
            for (const Json& b : js.at("background_objects"))
                s.background.push_back({placement_from(b.at("placement")), material_from(b.at("material")), uv_from(b.at("uv"))});
        }
        if (j.contains("source")) {
            const Json& js = j.at("source");
            const Json& g = js.at("generation");
            const Json& r = js.at("render");
            SourceRecord s;
            s.seed = js.at("seed").get<std::uint64_t>();
            s.set_index = js.at("set_index").get<std::uint64_t>();
            s.vessel_probability = g.at("vessel_probability").get<double>();
            s.textured_probability = g.at("textured_probability").get<double>();
            s.combine_probability = g.at("combine_probability").get<double>();
            s.max_background_objects = g.at("max_background_objects").get<int>();
            s.texture_dir = g.at("texture_dir").get<std::string>();
            s.hdri_dir = g.at("hdri_dir").get<std::string>();
            s.sky_count = g.at("sky_count").get<int>();
            s.width = r.at("width").get<int>();
            s.height = r.at("height").get<int>();
            s.samples_per_pixel = r.at("samples_per_pixel").get<int>();
            s.max_bounces = r.at("max_bounces").get<int>();
            s.render_seed = r.at("seed").get<std::uint64_t>();
            s.env_sampling = r.at("env_sampling").get<bool>();
            s.exposure = r.at("exposure").get<float>();
            m.source = s;
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(fmt::format("{}: {}", origin, e.what()));
    }
    m.validate();
    return m;
}

}  // namespace matforge::dataset
