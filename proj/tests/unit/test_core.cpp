// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <set>

#include "helpers.hpp"
#include "matforge/core/error.hpp"
#include "matforge/core/image_io.hpp"
#include "matforge/core/parallel.hpp"
#include "matforge/core/rng.hpp"
#include "matforge/render/renderer.hpp"

using namespace matforge;

namespace {

// Closed-form sRGB encode in double, independent of the library.
double srgb_oracle(double v) { return v <= 0.0031308 ? 12.92 * v : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055; }

}  // namespace

TEST_SUITE("core") {
    TEST_CASE("rng streams are deterministic and distinct") {
        Rng a(42), b(42), c(43);
        for (int i = 0; i < 100; ++i) {
            auto x = a.next_u32();
            CHECK(x == b.next_u32());
        }
        Rng a2(42);
        int same = 0;
        for (int i = 0; i < 100; ++i) same += a2.next_u32() == c.next_u32();
        CHECK(same < 3);
        CHECK(derive_seed(1, "a") != derive_seed(1, "b"));
        CHECK(derive_seed(1, 0) != derive_seed(2, 0));
        Rng u(7);
        for (int i = 0; i < 10000; ++i) {
            float f = u.uniform();
            REQUIRE(f >= 0.0f);
            REQUIRE(f < 1.0f);
            REQUIRE(u.below(5) < 5u);
        }
    }

    TEST_CASE("srgb transfer matches the closed form") {
        for (double v : {0.0, 0.001, 0.0031308, 0.01, 0.18, 0.5, 0.9, 1.0})
            CHECK(linear_to_srgb(static_cast<float>(v)) == doctest::Approx(srgb_oracle(v)).epsilon(1e-6));
        for (float v : {0.0f, 0.04f, 0.2f, 0.7f, 1.0f}) CHECK(srgb_to_linear(linear_to_srgb(v)) == doctest::Approx(v).epsilon(1e-5));
    }

    TEST_CASE("tonemap endpoints and middle grey") {
        CHECK(render::tonemap_channel(0.0f) == 0);
        CHECK(render::tonemap_channel(1.0f) == 255);
        CHECK(render::tonemap_channel(7.5f) == 255);
        // 8-bit sRGB of 0.18 linear from the closed form: 255 * 0.46135 = 117.6.
        const long expected = std::lround(255.0 * srgb_oracle(0.18));
        CHECK(expected == 118);
        CHECK(render::tonemap_channel(0.18f) == expected);
        int prev = -1;
        for (int i = 0; i <= 1000; ++i) {
            int v = render::tonemap_channel(i / 1000.0f);
            REQUIRE(v >= prev);
            prev = v;
        }
        CHECK(render::tonemap_channel(0.5f, 2.0f) == 255);
    }

    TEST_CASE("png round trip") {
        testing::TempDir dir("png");
        Image8 img(5, 3, 3);
        for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = static_cast<std::uint8_t>(i * 17);
        write_png(dir.path() / "a.png", img);
        CHECK(read_png8(dir.path() / "a.png") == img);
        Mask m(4, 4);
        m.at(1, 2) = 1;
        m.at(3, 0) = 1;
        write_png(dir.path() / "m.png", m);
        CHECK(read_mask(dir.path() / "m.png") == m);
        Image8 gray = read_png8(dir.path() / "m.png");
        CHECK(gray.channels == 1);
        CHECK(gray.data[2 * 4 + 1] == 255);
        CHECK_THROWS_AS(read_png8(dir.path() / "missing.png"), IoError);
    }

    TEST_CASE("hdr round trip keeps RGBE precision") {
        testing::TempDir dir("hdr");
        FloatImage img = testing::random_image(37, 9, 3, 5, 0.0f, 50.0f);
        img.at(0, 0, 0) = 0.0f;
        img.at(0, 0, 1) = 0.0f;
        img.at(0, 0, 2) = 0.0f;
        write_hdr(dir.path() / "a.hdr", img);
        FloatImage back = read_hdr(dir.path() / "a.hdr");
        REQUIRE(back.width == 37);
        REQUIRE(back.height == 9);
        for (int y = 0; y < 9; ++y)
            for (int x = 0; x < 37; ++x) {
                Vec3 a = img.rgb(x, y), b = back.rgb(x, y);
                float m = std::max({a.x, a.y, a.z});
                // Shared exponent: absolute error below 1/128 of the largest channel.
                CHECK(std::fabs(a.x - b.x) <= m / 128.0f + 1e-6f);
                CHECK(std::fabs(a.y - b.y) <= m / 128.0f + 1e-6f);
                CHECK(std::fabs(a.z - b.z) <= m / 128.0f + 1e-6f);
            }
    }

    TEST_CASE("image helpers") {
        FloatImage img = testing::random_image(6, 4, 3, 1);
        CHECK(resample_bilinear(img, 6, 4) == img);
        FloatImage c = crop(img, {1, 1, 4, 3});
        CHECK(c.width == 3);
        CHECK(c.height == 2);
        CHECK(c.at(0, 0, 2) == img.at(1, 1, 2));
        Mask m(8, 8);
        CHECK(bounding_box(m).width() == 0);
        m.at(2, 3) = 1;
        m.at(5, 6) = 1;
        CHECK(bounding_box(m) == PixelRect{2, 3, 6, 7});
        CHECK(m.count() == 2);
        Image8 q = from_unit_float(to_unit_float(Image8(2, 2, 3)));
        CHECK(q == Image8(2, 2, 3));
    }

    TEST_CASE("parallel_for visits every index once and rethrows") {
        std::vector<std::atomic<int>> hits(1000);
        parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; }, 4);
        for (auto& h : hits) REQUIRE(h.load() == 1);
        CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) { if (i == 7) throw IoError("boom"); }, 3), IoError);
        CHECK(worker_count() >= 1);
    }
}
