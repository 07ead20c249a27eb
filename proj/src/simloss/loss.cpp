// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "matforge/simloss/loss.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "matforge/core/error.hpp"
#include "matforge/core/rng.hpp"
#include "matforge/simd/kernels.hpp"

namespace matforge::simloss {

namespace {
double norm_of(std::span<const float> v) { return std::sqrt(simd::dot(v, v)); }
}  // namespace

void Descriptor::validate() const {
    if (values.size() != static_cast<std::size_t>(kDescriptorDim))
        throw NormError(fmt::format("descriptor {}: dimension {} != {}", image_ref, values.size(), kDescriptorDim));
    double n = norm_of(values);
    if (!(std::fabs(n - 1.0) <= kNormTolerance))
        throw NormError(fmt::format("descriptor {}: norm {} is not 1", image_ref, n));
}

void l2_normalize(std::vector<float>& values) {
    double n = norm_of(values);
    if (!(n > 0) || !std::isfinite(n)) throw NormError("cannot normalize a zero or non-finite vector");
    for (float& v : values) v = static_cast<float>(v / n);
}

void LossConfig::validate() const {
    if (!(temperature > 0)) throw InvalidArgument("loss: temperature must be positive");
}

double ground_truth_similarity(const ImageLabel& a, const ImageLabel& b) {
    if (a.set_id != b.set_id)
        throw CrossSetError(fmt::format("similarity across sets {} and {} is undefined", a.set_id, b.set_id));
    return 1.0 - std::fabs(a.ratio - b.ratio);
}

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size()) throw InvalidArgument("cosine: dimension mismatch");
    for (auto v : {a, b}) {
        double n = norm_of(v);
        if (!(std::fabs(n - 1.0) <= kNormTolerance)) throw NormError(fmt::format("cosine: norm {} is not 1", n));
    }
    return simd::dot(a, b);
}

double match_probability(double s_ap, double s_an, double t) {
    if (!(t > 0)) throw InvalidArgument("match probability: temperature must be positive");
    // e^{a}/(e^{a}+e^{b}) with the larger exponent factored out
    double a = s_ap / t, b = s_an / t;
    double m = std::max(a, b);
    double ea = std::exp(a - m), eb = std::exp(b - m);
    return ea / (ea + eb);
}

GateResult triplet_loss(double p, double sim_ap, double sim_an, const LossConfig& config) {
    if (sim_ap < sim_an)
        throw RoleOrderError(fmt::format("positive similarity {} below negative similarity {}", sim_ap, sim_an));
    GateResult r;
    r.threshold = config.gate_base + (sim_ap - sim_an) * config.gate_slope;
    if (sim_ap == sim_an || p > r.threshold) {
        r.gated = true;
        return r;
    }
    r.loss = -std::log(p);
    return r;
}

RoleAssignment assign_roles(const ImageLabel& anchor, const ImageLabel& first, const ImageLabel& second) {
    double s1 = ground_truth_similarity(anchor, first), s2 = ground_truth_similarity(anchor, second);
    if (s1 > s2) return RoleAssignment::FirstPositive;
    if (s2 > s1) return RoleAssignment::SecondPositive;
    return RoleAssignment::Equal;
}

BatchLoss batch_loss(std::span<const Descriptor> descriptors, std::span<const ImageLabel> labels,
                     const LossConfig& config) {
    config.validate();
    const int n = static_cast<int>(labels.size());
    if (descriptors.size() != labels.size()) throw InvalidArgument("batch loss: descriptor/label count mismatch");
    if (n < 3) throw BatchSizeError(fmt::format("batch loss needs at least 3 images, got {}", n));
    for (const auto& l : labels)
        if (l.set_id != labels[0].set_id) throw CrossSetError("batch loss: images from more than one set");

    std::vector<double> cos(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double c = cosine_similarity(descriptors[static_cast<std::size_t>(i)].values,
                                         descriptors[static_cast<std::size_t>(j)].values);
            cos[static_cast<std::size_t>(i) * n + j] = cos[static_cast<std::size_t>(j) * n + i] = c;
        }
    auto S = [&](int i, int j) { return cos[static_cast<std::size_t>(i) * n + j]; };

    BatchLoss out;
    auto evaluate = [&](int a, int b, int c) {
        TripletRecord rec;
        rec.anchor = a;
        const auto& la = labels[static_cast<std::size_t>(a)];
        switch (assign_roles(la, labels[static_cast<std::size_t>(b)], labels[static_cast<std::size_t>(c)])) {
            case RoleAssignment::FirstPositive: rec.positive = b, rec.negative = c; break;
            case RoleAssignment::SecondPositive: rec.positive = c, rec.negative = b; break;
            case RoleAssignment::Equal:
                rec.positive = b, rec.negative = c;
                rec.tie = true;
                break;
        }
        rec.sim_ap = ground_truth_similarity(la, labels[static_cast<std::size_t>(rec.positive)]);
        rec.sim_an = ground_truth_similarity(la, labels[static_cast<std::size_t>(rec.negative)]);
        rec.s_ap = S(a, rec.positive);
        rec.s_an = S(a, rec.negative);
        rec.p = match_probability(rec.s_ap, rec.s_an, config.temperature);
        GateResult g = triplet_loss(rec.p, rec.sim_ap, rec.sim_an, config);
        rec.loss = g.loss;
        rec.gated = g.gated;
        out.records.push_back(rec);
    };
    auto triple = [&](int i, int j, int k) {
        evaluate(i, j, k);
        evaluate(j, i, k);
        evaluate(k, i, j);
    };
    if (config.mode == TripletMode::AllTriples) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = j + 1; k < n; ++k) triple(i, j, k);
    } else {
        for (int i = 0; i + 2 < n; i += 3) triple(i, i + 1, i + 2);
    }

    double sum = 0;
    std::size_t gated = 0;
    for (const auto& r : out.records) {
        if (r.tie) continue;
        ++out.non_tie;
        sum += r.loss;
        gated += r.gated ? 1 : 0;
    }
    out.assignments = out.records.size();
    if (out.non_tie > 0) {
        out.mean_loss = sum / static_cast<double>(out.non_tie);
        out.gated_fraction = static_cast<double>(gated) / static_cast<double>(out.non_tie);
    }
    return out;
}

std::vector<ImageLabel> sample_batch(std::span<const SetImages> sets, std::uint64_t seed, const BatchOptions& options) {
    if (options.size < 1) throw InvalidArgument("batch size must be positive");
    Rng rng(seed);
    std::vector<std::size_t> candidates;
    if (options.vessel_parity) {
        // Both kinds must exist whatever this seed's coin says, so failures do not depend on the seed.
        std::size_t vessels = 0;
        for (const auto& s : sets) vessels += s.vessel ? 1 : 0;
        if (vessels == 0 || vessels == sets.size())
            throw SamplingError(fmt::format("vessel parity needs both kinds of set; found {} vessel and {} non-vessel",
                                            vessels, sets.size() - vessels));
        bool want_vessel = rng.bernoulli(0.5);
        for (std::size_t i = 0; i < sets.size(); ++i)
            if (sets[i].vessel == want_vessel) candidates.push_back(i);
    } else {
        candidates.resize(sets.size());
        std::iota(candidates.begin(), candidates.end(), std::size_t{0});
        if (candidates.empty()) throw SamplingError("no sets to sample from");
    }
    const SetImages& set = sets[candidates[rng.below(static_cast<std::uint32_t>(candidates.size()))]];
    const auto need = static_cast<std::size_t>(options.size);
    if (set.images.size() < need)
        throw SamplingError(fmt::format("set {} has {} images, batch needs {}", set.set_id, set.images.size(), need));
    // partial Fisher-Yates
    std::vector<std::size_t> order(set.images.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<ImageLabel> out;
    for (std::size_t i = 0; i < need; ++i) {
        std::size_t j = i + rng.below(static_cast<std::uint32_t>(order.size() - i));
        std::swap(order[i], order[j]);
        out.push_back(set.images[order[i]]);
    }
    return out;
}

}  // namespace matforge::simloss
