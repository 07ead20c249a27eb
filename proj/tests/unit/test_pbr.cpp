// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "helpers.hpp"
#include "matforge/core/error.hpp"
#include "matforge/pbr/material.hpp"
#include "matforge/pbr/mixing.hpp"
#include "matforge/pbr/texture_map.hpp"

using namespace matforge;
using namespace matforge::pbr;

namespace {

MaterialSpec textured(std::uint64_t seed, int w, int h, bool with_normal = true) {
    MaterialSpec m;
    m.kind = MaterialKind::Textured;
    m.id = "tex" + std::to_string(seed);
    m.base_color = TextureMap::from_image(testing::random_image(w, h, 3, seed));
    m.roughness = TextureMap::from_image(testing::random_image(w, h, 1, seed + 1));
    m.metallic = TextureMap::from_image(testing::random_image(w, h, 1, seed + 2));
    m.transmission = TextureMap::from_image(testing::random_image(w, h, 1, seed + 3));
    m.ior = 1.2f + 0.1f * static_cast<float>(seed % 5);
    if (with_normal) m.normal = TextureMap::normal_map(testing::random_image(w, h, 3, seed + 4, 0.2f, 0.8f));
    m.validate();
    return m;
}

const FloatImage& map_of(const ScalarChannel& c) { return std::get<TextureMap>(c).image(); }
const FloatImage& map_of(const ColorChannel& c) { return std::get<TextureMap>(c).image(); }

// Independent bilinear resampler: pixel centres, clamp to edge, double precision.
double bilinear_oracle(const FloatImage& src, int c, int w, int h, int x, int y) {
    double sx = (x + 0.5) * src.width / w - 0.5, sy = (y + 0.5) * src.height / h - 0.5;
    sx = std::clamp(sx, 0.0, static_cast<double>(src.width - 1));
    sy = std::clamp(sy, 0.0, static_cast<double>(src.height - 1));
    int x0 = static_cast<int>(std::floor(sx)), y0 = static_cast<int>(std::floor(sy));
    int x1 = std::min(x0 + 1, src.width - 1), y1 = std::min(y0 + 1, src.height - 1);
    double fx = sx - x0, fy = sy - y0;
    double top = (1 - fx) * src.at(x0, y0, c) + fx * src.at(x1, y0, c);
    double bot = (1 - fx) * src.at(x0, y1, c) + fx * src.at(x1, y1, c);
    return (1 - fy) * top + fy * bot;
}

void check_maps_close(const FloatImage& a, const FloatImage& b, double tol) {
    REQUIRE(a.width == b.width);
    REQUIRE(a.height == b.height);
    REQUIRE(a.channels == b.channels);
    for (std::size_t i = 0; i < a.data.size(); ++i) REQUIRE(std::fabs(a.data[i] - b.data[i]) <= tol);
}

}  // namespace

TEST_SUITE("pbr") {
    TEST_CASE("ratio schedule and ratio validation") {
        CHECK(set_ratios() == std::array<double, 5>{0.0, 0.25, 0.5, 0.75, 1.0});
        CHECK(MixtureRatio(0.25).percent() == 25);
        CHECK(MixtureRatio(1.0).percent() == 100);
        CHECK_THROWS_AS(MixtureRatio(1.5), InvalidArgument);
        CHECK_THROWS_AS(MixtureRatio(-0.01), InvalidArgument);
    }

    TEST_CASE("material validation") {
        CHECK_NOTHROW(MaterialSpec::uniform("a", {0.1f, 0.2f, 0.3f}, 0.5f, 0.0f, 0.0f, 1.5f));
        CHECK_THROWS_AS(MaterialSpec::uniform("a", {0.1f, 0.2f, 0.3f}, 1.5f, 0.0f, 0.0f, 1.5f), InvalidArgument);
        CHECK_THROWS_AS(MaterialSpec::uniform("a", {0.1f, 0.2f, 0.3f}, 0.5f, 0.0f, 0.0f, 2.6f), InvalidArgument);
        CHECK_THROWS_AS(MaterialSpec::uniform("a", {1.1f, 0.2f, 0.3f}, 0.5f, 0.0f, 0.0f, 1.5f), InvalidArgument);
        MaterialSpec t = textured(1, 4, 4);
        t.roughness = TextureMap::constant(3, 3, 0.5f);
        CHECK_THROWS_AS(t.validate(), MapShapeError);
        MaterialSpec u = MaterialSpec::uniform("u", {0.5f, 0.5f, 0.5f}, 0.5f, 0, 0, 1.5f);
        u.roughness = TextureMap::constant(2, 2, 0.5f);
        CHECK_THROWS_AS(u.validate(), MixKindError);
        FloatImage bad(2, 2, 1, 0.5f);
        bad.data[1] = 1.2f;
        CHECK_THROWS_AS(TextureMap::from_image(bad), InvalidArgument);
        bad.data[1] = std::nanf("");
        CHECK_THROWS_AS(TextureMap::from_image(bad), InvalidArgument);
    }

    TEST_CASE("uniform mixing arithmetic and endpoints") {
        auto a = MaterialSpec::uniform("a", {0.9f, 0.1f, 0.2f}, 0.2f, 0.0f, 0.4f, 1.3f);
        auto b = MaterialSpec::uniform("b", {0.1f, 0.3f, 0.8f}, 0.6f, 1.0f, 0.0f, 1.7f);
        auto m = mix_materials(a, b, MixtureRatio(0.5));
        CHECK(std::get<float>(m.roughness) == doctest::Approx(0.4f).epsilon(1e-6));
        CHECK(m.ior == doctest::Approx(1.5f).epsilon(1e-6));
        auto m0 = mix_materials(a, b, MixtureRatio(0.0));
        auto m1 = mix_materials(a, b, MixtureRatio(1.0));
        m0.id = a.id;
        m1.id = b.id;
        CHECK(m0 == a);
        CHECK(m1 == b);
        CHECK(mix_materials(a, b, MixtureRatio(0.25)).id == mixed_id("a", "b", MixtureRatio(0.25)));
        CHECK(mixed_id("a", "b", MixtureRatio(0.25)) != mixed_id("a", "b", MixtureRatio(0.5)));
        CHECK_THROWS_AS(mix_materials(a, textured(3, 2, 2), MixtureRatio(0.5)), MixKindError);
    }

    TEST_CASE("textured mixing is affine against a per-pixel oracle") {
        auto a = textured(10, 8, 8), b = textured(20, 8, 8);
        for (double r : {0.25, 0.5, 0.75, 0.3}) {
            CAPTURE(r);
            auto m = mix_materials(a, b, MixtureRatio(r));
            auto oracle = [&](const FloatImage& x, const FloatImage& y, const FloatImage& got) {
                for (int py = 0; py < 8; ++py)
                    for (int px = 0; px < 8; ++px)
                        for (int c = 0; c < x.channels; ++c) {
                            double want = (1 - r) * x.at(px, py, c) + r * y.at(px, py, c);
                            REQUIRE(std::fabs(got.at(px, py, c) - want) <= 1e-6);
                        }
            };
            oracle(map_of(a.base_color), map_of(b.base_color), map_of(m.base_color));
            oracle(map_of(a.roughness), map_of(b.roughness), map_of(m.roughness));
            oracle(map_of(a.metallic), map_of(b.metallic), map_of(m.metallic));
            oracle(map_of(a.transmission), map_of(b.transmission), map_of(m.transmission));
            CHECK(m.ior == doctest::Approx((1 - r) * a.ior + r * b.ior).epsilon(1e-6));

            // Normals: blended in encoded space, then renormalised after decoding.
            const FloatImage &na = a.normal->image(), &nb = b.normal->image(), &nm = m.normal->image();
            for (int py = 0; py < 8; ++py)
                for (int px = 0; px < 8; ++px) {
                    Vec3 e{static_cast<float>((1 - r) * na.at(px, py, 0) + r * nb.at(px, py, 0)),
                           static_cast<float>((1 - r) * na.at(px, py, 1) + r * nb.at(px, py, 1)),
                           static_cast<float>((1 - r) * na.at(px, py, 2) + r * nb.at(px, py, 2))};
                    Vec3 want = normalize(e * 2.0f - Vec3{1, 1, 1});
                    Vec3 got = decode_normal(nm.rgb(px, py));
                    REQUIRE(length(got) == doctest::Approx(1.0f).epsilon(1e-4));
                    REQUIRE(dot(got, want) > 0.9999f);
                }
        }
    }

    TEST_CASE("mixing symmetry and idempotence") {
        auto a = textured(30, 8, 8), b = textured(40, 8, 8);
        for (double r : {0.0, 0.25, 0.5, 0.75, 1.0, 0.1}) {
            auto ab = mix_materials(a, b, MixtureRatio(r));
            auto ba = mix_materials(b, a, MixtureRatio(1 - r));
            check_maps_close(map_of(ab.base_color), map_of(ba.base_color), 1e-6);
            check_maps_close(map_of(ab.roughness), map_of(ba.roughness), 1e-6);
            check_maps_close(map_of(ab.metallic), map_of(ba.metallic), 1e-6);
            check_maps_close(map_of(ab.transmission), map_of(ba.transmission), 1e-6);
            check_maps_close(ab.normal->image(), ba.normal->image(), 1e-6);
            CHECK(std::fabs(ab.ior - ba.ior) <= 1e-6f);

            auto aa = mix_materials(a, a, MixtureRatio(r));
            check_maps_close(map_of(aa.base_color), map_of(a.base_color), 1e-6);
            check_maps_close(map_of(aa.roughness), map_of(a.roughness), 1e-6);
            check_maps_close(aa.normal->image(), a.normal->image(), 1e-6);
        }
    }

    TEST_CASE("maps of unequal size are resampled to the larger one") {
        auto a = textured(50, 4, 4), b = textured(60, 8, 8);
        auto m = mix_materials(a, b, MixtureRatio(0.5));
        CHECK(m.map_size() == std::pair{8, 8});
        auto up = resample_map(std::get<TextureMap>(a.roughness), 8, 8).image();
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x)
                CHECK(map_of(m.roughness).at(x, y, 0) ==
                      doctest::Approx(0.5 * up.at(x, y, 0) + 0.5 * map_of(b.roughness).at(x, y, 0)).epsilon(1e-6));
    }

    TEST_CASE("resample_map") {
        auto c = resample_map(TextureMap::constant(2, 2, 0.5f), 7, 7);
        for (float v : c.samples()) CHECK(v == 0.5f);
        auto r = TextureMap::from_image(testing::random_image(5, 3, 3, 9));
        CHECK(resample_map(r, 5, 3) == r);

        FloatImage ramp(2, 1, 1);
        ramp.data = {0.0f, 1.0f};
        auto out = resample_map(TextureMap::from_image(ramp), 3, 1);
        const double expected[3] = {0.0, 0.5, 1.0};
        for (int x = 0; x < 3; ++x) {
            CHECK(bilinear_oracle(ramp, 0, 3, 1, x, 0) == doctest::Approx(expected[x]));
            CHECK(out.image().at(x, 0, 0) == doctest::Approx(expected[x]).epsilon(1e-6));
        }
        FloatImage src = testing::random_image(5, 4, 3, 11);
        auto big = resample_map(TextureMap::from_image(src), 13, 9);
        for (int y = 0; y < 9; ++y)
            for (int x = 0; x < 13; ++x)
                for (int ch = 0; ch < 3; ++ch)
                    REQUIRE(big.image().at(x, y, ch) == doctest::Approx(bilinear_oracle(src, ch, 13, 9, x, y)).epsilon(1e-5));
        CHECK_THROWS_AS(resample_map(r, 0, 3), InvalidArgument);
    }

    TEST_CASE("family combination") {
        auto a = textured(70, 4, 4), b = textured(80, 4, 4);
        CHECK(combine_material_families(a, b, 5) == combine_material_families(a, b, 5));
        auto aa = combine_material_families(a, a, 123);
        check_maps_close(map_of(aa.base_color), map_of(a.base_color), 1e-6);
        check_maps_close(map_of(aa.roughness), map_of(a.roughness), 1e-6);
        check_maps_close(map_of(aa.transmission), map_of(a.transmission), 1e-6);
        CHECK(aa.ior == doctest::Approx(a.ior));

        std::array<std::array<int, 3>, 6> counts{};
        for (std::uint64_t s = 0; s < 1000; ++s) {
            auto c = family_choices(s);
            for (int p = 0; p < 6; ++p) counts[p][static_cast<int>(c[p])]++;
        }
        for (int p = 0; p < 6; ++p)
            for (int k = 0; k < 3; ++k) CHECK(std::fabs(counts[p][k] / 1000.0 - 1.0 / 3.0) <= 0.05);

        // Output follows the declared choices.
        auto c = family_choices(77);
        auto m = combine_material_families(a, b, 77);
        const FloatImage& want = c[1] == FamilyChoice::TakeA   ? map_of(a.roughness)
                                 : c[1] == FamilyChoice::TakeB ? map_of(b.roughness)
                                                               : map_of(mix_materials(a, b, MixtureRatio(0.5)).roughness);
        check_maps_close(map_of(m.roughness), want, 1e-6);
        CHECK_THROWS_AS(combine_material_families(a, MaterialSpec::uniform("u", {0, 0, 0}, 0, 0, 0, 1.5f), 1),
                        MixKindError);
    }

    TEST_CASE("random materials") {
        CHECK(sample_random_material(9, MaterialKind::Uniform, {}) == sample_random_material(9, MaterialKind::Uniform, {}));
        double sum = 0;
        for (std::uint64_t s = 0; s < 10000; ++s) {
            auto m = sample_random_material(s, MaterialKind::Uniform, {});
            REQUIRE_NOTHROW(m.validate());
            sum += std::get<float>(m.roughness);
        }
        CHECK(std::fabs(sum / 10000 - 0.5) <= 0.02);
        auto lib = std::vector<MaterialSpec>{textured(90, 4, 4)};
        SamplingOptions no_combine;
        no_combine.combine_probability = 0;
        for (std::uint64_t s = 0; s < 5; ++s)
            CHECK(sample_random_material(s, MaterialKind::Textured, lib, no_combine) == lib[0]);
        CHECK_THROWS_AS(sample_random_material(1, MaterialKind::Textured, {}), EmptyLibraryError);
    }
}
