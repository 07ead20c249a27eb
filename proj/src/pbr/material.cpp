// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/pbr/material.hpp"

#include <cmath>

#include "matforge/core/error.hpp"

namespace matforge::pbr {
namespace {

bool in_unit(float v) { return std::isfinite(v) && v >= 0.0f && v <= 1.0f; }

void check_scalar(const ScalarChannel& c, const char* name) {
    if (const float* v = std::get_if<float>(&c); v && !in_unit(*v))
        throw InvalidArgument(std::string("material ") + name + " outside [0,1]");
}

template <class F>
void for_each_map(const MaterialSpec& m, F&& f) {
    if (auto* t = std::get_if<TextureMap>(&m.base_color)) f(*t);
    if (auto* t = std::get_if<TextureMap>(&m.roughness)) f(*t);
    if (auto* t = std::get_if<TextureMap>(&m.metallic)) f(*t);
    if (auto* t = std::get_if<TextureMap>(&m.transmission)) f(*t);
    if (m.normal) f(*m.normal);
}

}  // namespace

MaterialSpec MaterialSpec::uniform(std::string id, Vec3 base_color, float roughness, float metallic,
                                   float transmission, float ior) {
    MaterialSpec m;
    m.kind = MaterialKind::Uniform;
    m.id = std::move(id);
    m.base_color = base_color;
    m.roughness = roughness;
    m.metallic = metallic;
    m.transmission = transmission;
    m.ior = ior;
    m.validate();
    return m;
}

void MaterialSpec::validate() const {
    if (const Vec3* c = std::get_if<Vec3>(&base_color); c && !(in_unit(c->x) && in_unit(c->y) && in_unit(c->z)))
        throw InvalidArgument("material base_color outside [0,1]^3");
    check_scalar(roughness, "roughness");
    check_scalar(metallic, "metallic");
    check_scalar(transmission, "transmission");
    if (!(ior >= kIorMin && ior <= kIorMax)) throw InvalidArgument("material ior outside [1.0, 2.5]");

    int maps = 0;
    std::optional<std::pair<int, int>> size;
    for_each_map(*this, [&](const TextureMap& t) {
        ++maps;
        std::pair<int, int> s{t.width(), t.height()};
        if (size && *size != s) throw MapShapeError("material '" + id + "': maps differ in size");
        size = s;
    });
    if (kind == MaterialKind::Uniform && maps > 0) throw MixKindError("uniform material '" + id + "' carries maps");
    if (const TextureMap* t = std::get_if<TextureMap>(&base_color); t && t->channels() != 3)
        throw InvalidArgument("albedo map must have 3 channels");
    if (normal && normal->channels() != 3) throw InvalidArgument("normal map must have 3 channels");
}

std::optional<std::pair<int, int>> MaterialSpec::map_size() const {
    std::optional<std::pair<int, int>> size;
    for_each_map(*this, [&](const TextureMap& t) {
        if (!size) size = std::pair{t.width(), t.height()};
    });
    return size;
}

float scalar_value(const ScalarChannel& c, Vec2 uv) {
    if (const float* v = std::get_if<float>(&c)) return *v;
    return std::get<TextureMap>(c).sample1(uv);
}

Vec3 color_value(const ColorChannel& c, Vec2 uv) {
    if (const Vec3* v = std::get_if<Vec3>(&c)) return *v;
    return std::get<TextureMap>(c).sample3(uv);
}

ShadingParams MaterialSpec::evaluate(Vec2 uv) const {
    ShadingParams p;
    p.base_color = color_value(base_color, uv);
    p.roughness = scalar_value(roughness, uv);
    p.metallic = scalar_value(metallic, uv);
    p.transmission = scalar_value(transmission, uv);
    p.ior = ior;
    if (normal) p.tangent_normal = decode_normal(normal->sample3(uv));
    return p;
}

}  // namespace matforge::pbr
