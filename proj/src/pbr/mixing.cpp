// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/pbr/mixing.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "matforge/core/error.hpp"
#include "matforge/core/rng.hpp"
#include "matforge/simd/kernels.hpp"

namespace matforge::pbr {

MixtureRatio::MixtureRatio(double r) : r_(r) {
    if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument(fmt::format("mixture ratio {} outside [0,1]", r));
}

int MixtureRatio::percent() const { return static_cast<int>(std::lround(r_ * 100.0)); }

const std::array<double, 5>& set_ratios() {
    static constexpr std::array<double, 5> kRatios{0.0, 0.25, 0.5, 0.75, 1.0};
    return kRatios;
}

std::string mixed_id(const std::string& a, const std::string& b, MixtureRatio r) {
    return fmt::format("mix({},{},{:.4f})", a, b, r.value());
}

namespace {

struct Size {
    int w = 0, h = 0;
};

Size common_size(const MaterialSpec& a, const MaterialSpec& b) {
    Size s{1, 1};
    for (const auto* m : {&a, &b}) {
        if (auto ms = m->map_size()) {
            s.w = std::max(s.w, ms->first);
            s.h = std::max(s.h, ms->second);
        }
    }
    return s;
}

TextureMap fit(const TextureMap& t, Size s) {
    return (t.width() == s.w && t.height() == s.h) ? t : resample_map(t, s.w, s.h);
}

TextureMap as_map(const ScalarChannel& c, Size s) {
    if (const float* v = std::get_if<float>(&c)) return TextureMap::constant(s.w, s.h, *v);
    return fit(std::get<TextureMap>(c), s);
}

TextureMap as_map(const ColorChannel& c, Size s) {
    if (const Vec3* v = std::get_if<Vec3>(&c)) return TextureMap::constant(s.w, s.h, *v);
    return fit(std::get<TextureMap>(c), s);
}

float lerp1(float a, float b, float r) {
    float lhs = (1.0f - r) * a;
    float rhs = r * b;
    return lhs + rhs;
}

FloatImage lerp_maps(const TextureMap& a, const TextureMap& b, float r) {
    if (a.width() != b.width() || a.height() != b.height() || a.channels() != b.channels())
        throw MapShapeError("map shapes differ after resampling");
    FloatImage out(a.width(), a.height(), a.channels());
    simd::lerp(a.samples(), b.samples(), r, out.data);
    for (float& v : out.data) v = std::clamp(v, 0.0f, 1.0f);
    return out;
}

ScalarChannel mix_channel(const ScalarChannel& a, const ScalarChannel& b, float r, Size s) {
    const float* va = std::get_if<float>(&a);
    const float* vb = std::get_if<float>(&b);
    if (va && vb) return std::clamp(lerp1(*va, *vb, r), 0.0f, 1.0f);
    return TextureMap::from_image(lerp_maps(as_map(a, s), as_map(b, s), r));
}

ColorChannel mix_channel(const ColorChannel& a, const ColorChannel& b, float r, Size s) {
    const Vec3* va = std::get_if<Vec3>(&a);
    const Vec3* vb = std::get_if<Vec3>(&b);
    if (va && vb) {
        return Vec3{std::clamp(lerp1(va->x, vb->x, r), 0.0f, 1.0f), std::clamp(lerp1(va->y, vb->y, r), 0.0f, 1.0f),
                    std::clamp(lerp1(va->z, vb->z, r), 0.0f, 1.0f)};
    }
    return TextureMap::from_image(lerp_maps(as_map(a, s), as_map(b, s), r));
}

std::optional<TextureMap> mix_normal(const std::optional<TextureMap>& a, const std::optional<TextureMap>& b, float r,
                                     Size s) {
    if (!a && !b) return std::nullopt;
    TextureMap ma = a ? fit(*a, s) : TextureMap::flat_normal(s.w, s.h);
    TextureMap mb = b ? fit(*b, s) : TextureMap::flat_normal(s.w, s.h);
    return TextureMap::normal_map(lerp_maps(ma, mb, r));
}

// Maps of an untouched channel still have to match the output size.
ScalarChannel fitted(const ScalarChannel& c, Size s) {
    if (const auto* t = std::get_if<TextureMap>(&c)) return fit(*t, s);
    return c;
}
ColorChannel fitted(const ColorChannel& c, Size s) {
    if (const auto* t = std::get_if<TextureMap>(&c)) return fit(*t, s);
    return c;
}

}  // namespace

MaterialSpec mix_materials(const MaterialSpec& a, const MaterialSpec& b, MixtureRatio ratio) {
    if (a.kind != b.kind) throw MixKindError("cannot mix uniform with textured material");
    const float r = static_cast<float>(ratio.value());
    if (ratio.value() == 0.0 || ratio.value() == 1.0) {
        MaterialSpec out = ratio.value() == 0.0 ? a : b;
        out.id = mixed_id(a.id, b.id, ratio);
        return out;
    }
    const Size s = common_size(a, b);
    MaterialSpec out;
    out.kind = a.kind;
    out.id = mixed_id(a.id, b.id, ratio);
    out.base_color = mix_channel(a.base_color, b.base_color, r, s);
    out.roughness = mix_channel(a.roughness, b.roughness, r, s);
    out.metallic = mix_channel(a.metallic, b.metallic, r, s);
    out.transmission = mix_channel(a.transmission, b.transmission, r, s);
    out.ior = std::clamp(lerp1(a.ior, b.ior, r), kIorMin, kIorMax);
    out.normal = mix_normal(a.normal, b.normal, r, s);
    out.validate();
    return out;
}

FamilyChoices family_choices(std::uint64_t seed) {
    Rng rng(seed, hash_name("family"));
    FamilyChoices c{};
    for (auto& choice : c) choice = static_cast<FamilyChoice>(rng.below(3));
    return c;
}

MaterialSpec combine_material_families(const MaterialSpec& a, const MaterialSpec& b, std::uint64_t seed) {
    if (a.kind != MaterialKind::Textured || b.kind != MaterialKind::Textured)
        throw MixKindError("family combination needs two textured materials");
    const FamilyChoices choice = family_choices(seed);
    const Size s = common_size(a, b);

    auto pick = [&](FamilyChoice c, const auto& ca, const auto& cb) {
        using Channel = std::decay_t<decltype(ca)>;
        switch (c) {
            case FamilyChoice::TakeA: return Channel(fitted(ca, s));
            case FamilyChoice::TakeB: return Channel(fitted(cb, s));
            default: return Channel(mix_channel(ca, cb, 0.5f, s));
        }
    };

    MaterialSpec out;
    out.kind = MaterialKind::Textured;
    out.id = fmt::format("combine({},{},{:016x})", a.id, b.id, seed);
    out.base_color = pick(choice[0], a.base_color, b.base_color);
    out.roughness = pick(choice[1], a.roughness, b.roughness);
    out.metallic = pick(choice[2], a.metallic, b.metallic);
    out.transmission = pick(choice[3], a.transmission, b.transmission);
    switch (choice[4]) {
        case FamilyChoice::TakeA: out.normal = a.normal ? std::optional(fit(*a.normal, s)) : std::nullopt; break;
        case FamilyChoice::TakeB: out.normal = b.normal ? std::optional(fit(*b.normal, s)) : std::nullopt; break;
        default: out.normal = mix_normal(a.normal, b.normal, 0.5f, s); break;
    }
    switch (choice[5]) {
        case FamilyChoice::TakeA: out.ior = a.ior; break;
        case FamilyChoice::TakeB: out.ior = b.ior; break;
        default: out.ior = lerp1(a.ior, b.ior, 0.5f); break;
    }
    out.validate();
    return out;
}

MaterialSpec sample_random_material(std::uint64_t seed, MaterialKind kind, const std::vector<MaterialSpec>& library,
                                    const SamplingOptions& options) {
    Rng rng(seed, hash_name("material"));
    if (kind == MaterialKind::Uniform) {
        float r = rng.uniform(), g = rng.uniform(), b = rng.uniform();
        float roughness = rng.uniform();
        float metallic = rng.uniform();
        float transmission = rng.uniform();
        float ior = static_cast<float>(rng.uniform(kIorMin, kIorMax));
        return MaterialSpec::uniform(fmt::format("uniform-{:016x}", seed), {r, g, b}, roughness, metallic,
                                     transmission, ior);
    }
    if (library.empty()) throw EmptyLibraryError("textured material requested from an empty library");
    const auto n = static_cast<std::uint32_t>(library.size());
    const MaterialSpec& first = library[rng.below(n)];
    if (!rng.bernoulli(options.combine_probability)) return first;
    const MaterialSpec& second = library[rng.below(n)];
    return combine_material_families(first, second, derive_seed(seed, "combine"));
}

}  // namespace matforge::pbr
