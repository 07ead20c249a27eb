// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "matforge/core/error.hpp"
#include "matforge/core/rng.hpp"
#include "matforge/simloss/loss.hpp"

using namespace matforge;
using namespace matforge::simloss;

namespace {

std::string fmt_ref(const std::string& set, int scene, double ratio) {
    return "set_" + set + "/scene_" + std::to_string(scene) + "/img_r" +
           std::to_string(static_cast<int>(std::lround(ratio * 100))) + ".png";
}

ImageLabel label(double ratio, int scene = 0, std::string set = "000000") {
    return {fmt_ref(set, scene, ratio), set, scene, ratio};
}

Descriptor unit_descriptor(std::uint64_t seed) {
    Rng rng(seed);
    Descriptor d;
    d.values.resize(kDescriptorDim);
    for (auto& v : d.values) v = rng.uniform() - 0.5f;
    l2_normalize(d.values);
    return d;
}

// Encodes the ratio as an angle in a fixed plane, so cosine falls with |R1 - R2|.
Descriptor angle_descriptor(double ratio) {
    Descriptor d;
    d.values.assign(kDescriptorDim, 0.0f);
    double th = ratio * std::numbers::pi / 2;
    d.values[0] = static_cast<float>(std::cos(th));
    d.values[1] = static_cast<float>(std::sin(th));
    return d;
}

// Straightforward reference: plain exponentials, double-precision dot products and
// every triple visited with each member as anchor.
struct OracleResult {
    double mean = 0, gated_fraction = 0;
    std::size_t assignments = 0, non_tie = 0;
};

OracleResult oracle_batch_loss(const std::vector<Descriptor>& d, const std::vector<ImageLabel>& l, double t) {
    const std::size_t n = d.size();
    auto cosd = [&](std::size_t i, std::size_t j) {
        double s = 0;
        for (std::size_t k = 0; k < d[i].values.size(); ++k) s += double(d[i].values[k]) * d[j].values[k];
        return s;
    };
    OracleResult r;
    double sum = 0;
    std::size_t gated = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                std::size_t mem[3] = {i, j, k};
                for (int a = 0; a < 3; ++a) {
                    std::size_t anc = mem[a], x = mem[(a + 1) % 3], y = mem[(a + 2) % 3];
                    ++r.assignments;
                    double gx = 1 - std::fabs(l[anc].ratio - l[x].ratio);
                    double gy = 1 - std::fabs(l[anc].ratio - l[y].ratio);
                    if (gx == gy) continue;
                    std::size_t pos = gx > gy ? x : y, neg = gx > gy ? y : x;
                    double gp = std::max(gx, gy), gn = std::min(gx, gy);
                    double ep = std::exp(cosd(anc, pos) / t), en = std::exp(cosd(anc, neg) / t);
                    double p = ep / (ep + en);
                    ++r.non_tie;
                    if (p > 0.5 + 0.25 * (gp - gn)) {
                        ++gated;
                    } else {
                        sum += -std::log(p);
                    }
                }
            }
    r.mean = r.non_tie ? sum / r.non_tie : 0;
    r.gated_fraction = r.non_tie ? double(gated) / r.non_tie : 0;
    return r;
}

const double kRatios[6] = {0.0, 0.25, 0.4, 0.5, 0.75, 1.0};

}  // namespace

TEST_SUITE("simloss") {
    TEST_CASE("ground truth similarity") {
        CHECK(ground_truth_similarity(label(0.25), label(0.75)) == doctest::Approx(0.5));
        CHECK(ground_truth_similarity(label(0.4), label(0.4)) == 1.0);
        CHECK(ground_truth_similarity(label(0.0), label(1.0)) == 0.0);
        CHECK(ground_truth_similarity(label(0.0, 0), label(0.0, 3)) == 1.0);
        CHECK_THROWS_AS(ground_truth_similarity(label(0.5, 0, "000000"), label(0.5, 0, "000001")), CrossSetError);
    }

    TEST_CASE("cosine similarity of unit descriptors") {
        auto a = unit_descriptor(1), b = unit_descriptor(2);
        double ref = 0;
        for (int i = 0; i < kDescriptorDim; ++i) ref += double(a.values[i]) * b.values[i];
        CHECK(cosine_similarity(a.values, b.values) == doctest::Approx(ref).epsilon(1e-6));
        CHECK(cosine_similarity(a.values, a.values) == doctest::Approx(1.0).epsilon(1e-6));
        auto c = a.values;
        for (auto& v : c) v *= 1.01f;
        CHECK_THROWS_AS(cosine_similarity(c, b.values), NormError);
        std::vector<float> zero(kDescriptorDim, 0.0f);
        CHECK_THROWS_AS(l2_normalize(zero), NormError);
        CHECK_NOTHROW(a.validate());
        a.values.pop_back();
        CHECK_THROWS_AS(a.validate(), NormError);
    }

    TEST_CASE("match probability") {
        CHECK(match_probability(0.3, 0.3, 0.2) == 0.5);
        CHECK(match_probability(-1.0, -1.0, 0.2) == 0.5);
        CHECK(match_probability(1.0, 0.0, 0.2) == doctest::Approx(0.9933071490757153).epsilon(1e-5));
        for (double a : {-1.0, -0.3, 0.2, 0.9})
            for (double b : {-0.8, 0.0, 0.5, 1.0})
                CHECK(match_probability(a, b, 0.2) + match_probability(b, a, 0.2) == doctest::Approx(1.0).epsilon(1e-12));
        // tiny temperatures would overflow a naive exp
        double p = match_probability(1.0, -1.0, 1e-3);
        CHECK(std::isfinite(p));
        CHECK(p == 1.0);
        CHECK(match_probability(-1.0, 1.0, 1e-3) >= 0.0);
        double prev = 0;
        for (int i = -20; i <= 20; ++i) {
            double q = match_probability(i / 20.0, 0.0, 0.2);
            CHECK(q > prev);
            prev = q;
        }
        CHECK_THROWS_AS(match_probability(0.1, 0.2, 0.0), InvalidArgument);
    }

    TEST_CASE("semi-hard gate") {
        // threshold ranges from 0.5 for nearly equal similarities to 0.75 at the extremes
        CHECK(triplet_loss(0.4, 1.0, 0.0).threshold == doctest::Approx(0.75));
        CHECK(triplet_loss(0.4, 0.6, 0.6 - 1e-12).threshold == doctest::Approx(0.5));
        auto r = triplet_loss(0.5, 0.9, 0.7);
        CHECK_FALSE(r.gated);
        CHECK(r.loss == doctest::Approx(0.693147).epsilon(1e-6));
        auto g = triplet_loss(0.7, 0.9, 0.7);  // threshold 0.55
        CHECK(g.gated);
        CHECK(g.loss == 0.0);
        auto tie = triplet_loss(0.1, 0.8, 0.8);
        CHECK(tie.gated);
        CHECK(tie.loss == 0.0);
        CHECK_THROWS_AS(triplet_loss(0.5, 0.5, 0.6), RoleOrderError);
    }

    TEST_CASE("gate boundary is exclusive") {
        double tau = 0.5 + (1.0 - 0.5) * 0.25;
        auto at = triplet_loss(tau, 1.0, 0.5);
        CHECK_FALSE(at.gated);
        CHECK(at.loss == doctest::Approx(-std::log(tau)));
        auto above = triplet_loss(std::nextafter(tau, 1.0), 1.0, 0.5);
        CHECK(above.gated);
        CHECK(above.loss == 0.0);
    }

    TEST_CASE("role assignment") {
        CHECK(assign_roles(label(0.0), label(0.25), label(0.75)) == RoleAssignment::FirstPositive);
        CHECK(assign_roles(label(0.5), label(0.0), label(0.6)) == RoleAssignment::SecondPositive);
        CHECK(assign_roles(label(0.5), label(0.25), label(0.75)) == RoleAssignment::Equal);
        CHECK(assign_roles(label(0.4, 0), label(0.4, 1), label(0.4, 2)) == RoleAssignment::Equal);
    }

    TEST_CASE("batch loss matches the reference on small batches") {
        for (int n = 3; n <= 6; ++n)
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                Rng rng(derive_seed(seed, n));
                std::vector<Descriptor> d;
                std::vector<ImageLabel> l;
                for (int i = 0; i < n; ++i) {
                    l.push_back(label(kRatios[rng.below(6)], static_cast<int>(rng.below(6))));
                    d.push_back(unit_descriptor(derive_seed(seed * 100 + n, i)));
                }
                auto got = batch_loss(d, l);
                auto want = oracle_batch_loss(d, l, 0.2);
                CHECK(got.assignments == want.assignments);
                CHECK(got.non_tie == want.non_tie);
                CHECK(got.mean_loss == doctest::Approx(want.mean).epsilon(1e-9));
                CHECK(got.gated_fraction == doctest::Approx(want.gated_fraction).epsilon(1e-9));
            }
    }

    TEST_CASE("batch loss edge cases") {
        std::vector<ImageLabel> l = {label(0.0), label(0.5), label(1.0)};
        std::vector<Descriptor> same(3, unit_descriptor(9));
        auto r = batch_loss(same, l);
        CHECK(r.assignments == 3);
        // anchor 0.5 sees a tie; the other two anchors are ungated at p = 0.5
        CHECK(r.non_tie == 2);
        CHECK(r.mean_loss == doctest::Approx(std::log(2.0)));
        CHECK(r.gated_fraction == 0.0);

        std::vector<ImageLabel> two = {label(0.0), label(0.5)};
        CHECK_THROWS_AS(batch_loss(std::vector<Descriptor>(2, unit_descriptor(1)), two), BatchSizeError);
        std::vector<ImageLabel> mixed = {label(0.0), label(0.5), label(1.0, 0, "000001")};
        CHECK_THROWS_AS(batch_loss(same, mixed), CrossSetError);
    }

    TEST_CASE("chunked and all-triples assignment counts") {
        std::vector<ImageLabel> l;
        std::vector<Descriptor> d;
        for (int i = 0; i < 12; ++i) {
            l.push_back(label(kRatios[i % 6], i / 6));
            d.push_back(unit_descriptor(100 + i));
        }
        LossConfig chunked;
        chunked.mode = TripletMode::Chunked;
        CHECK(batch_loss(d, l, chunked).assignments == 12);
        CHECK(batch_loss(d, l).assignments == 3 * 220);
    }

    TEST_CASE("descriptors that encode the ratio score lower than shuffled ones") {
        std::vector<ImageLabel> l;
        std::vector<Descriptor> d;
        for (int i = 0; i < 12; ++i) {
            l.push_back(label(kRatios[i % 6], i / 6));
            d.push_back(angle_descriptor(l.back().ratio));
        }
        double encoded = batch_loss(d, l).mean_loss;
        Rng rng(5);
        double shuffled = 0;
        for (int trial = 0; trial < 20; ++trial) {
            auto s = d;
            for (std::size_t i = s.size() - 1; i > 0; --i) std::swap(s[i], s[rng.below(static_cast<std::uint32_t>(i + 1))]);
            shuffled += batch_loss(s, l).mean_loss / 20;
        }
        CHECK(encoded < shuffled);
    }

    TEST_CASE("batch sampling") {
        std::vector<SetImages> sets;
        for (int s = 0; s < 10; ++s) {
            SetImages set;
            set.set_id = std::to_string(100000 + s);
            set.vessel = s == 3;
            for (int k = 0; k < 6; ++k)
                for (double r : kRatios) set.images.push_back(label(r, k, set.set_id));
            sets.push_back(set);
        }
        auto b = sample_batch(sets, 42);
        REQUIRE(b.size() == 12);
        std::set<std::string> refs;
        for (const auto& x : b) {
            refs.insert(x.image_ref);
            CHECK(x.set_id == b[0].set_id);
        }
        CHECK(refs.size() == 12);
        auto again = sample_batch(sets, 42);
        for (std::size_t i = 0; i < b.size(); ++i) CHECK(again[i].image_ref == b[i].image_ref);

        int vessel = 0;
        for (std::uint64_t s = 0; s < 1000; ++s) vessel += sample_batch(sets, derive_seed(7, s))[0].set_id == "100003";
        CHECK(vessel / 1000.0 == doctest::Approx(0.5).epsilon(0.1));

        BatchOptions no_parity;
        no_parity.vessel_parity = false;
        vessel = 0;
        for (std::uint64_t s = 0; s < 1000; ++s)
            vessel += sample_batch(sets, derive_seed(7, s), no_parity)[0].set_id == "100003";
        CHECK(vessel < 200);

        auto plain = sets;
        plain[3].vessel = false;
        CHECK_THROWS_AS(sample_batch(plain, 1), SamplingError);
        CHECK_NOTHROW(sample_batch(plain, 1, no_parity));
        BatchOptions big;
        big.size = 37;
        CHECK_THROWS_AS(sample_batch(sets, 1, big), SamplingError);
        CHECK_THROWS_AS(sample_batch(std::span<const SetImages>{}, 1, no_parity), SamplingError);
    }
}
