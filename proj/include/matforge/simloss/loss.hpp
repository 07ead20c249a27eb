// Copyright 2026 The matforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace matforge::simloss {

inline constexpr int kDescriptorDim = 512;
inline constexpr double kNormTolerance = 1e-4;

struct Descriptor {
    std::string image_ref;
    std::vector<float> values;

    /// Dimension kDescriptorDim and unit L2 norm within kNormTolerance; throws NormError.
    void validate() const;
};

/// Scales `values` to unit L2 norm; throws NormError for a zero vector.
void l2_normalize(std::vector<float>& values);

struct ImageLabel {
    std::string image_ref;
    std::string set_id;
    int scene_index = 0;
    double ratio = 0;  // fraction of material B
};

enum class TripletMode {
    AllTriples,  // every unordered triple, each member once as anchor
    Chunked,     // consecutive disjoint groups of three, each member once as anchor
};

struct LossConfig {
    double temperature = 0.2;
    double gate_base = 0.5;
    double gate_slope = 0.25;
    TripletMode mode = TripletMode::AllTriples;

    void validate() const;
};

/// 1 - |R1 - R2|; throws CrossSetError for labels from different sets.
double ground_truth_similarity(const ImageLabel& a, const ImageLabel& b);

/// Dot product of two unit vectors; throws NormError when either norm is off by more than kNormTolerance.
double cosine_similarity(std::span<const float> a, std::span<const float> b);

/// Softmax probability that the anchor matches the positive, evaluated without overflow.
double match_probability(double s_ap, double s_an, double temperature);

struct GateResult {
    double loss = 0;
    bool gated = false;
    double threshold = 0;
};

/// Semi-hard gate: zero loss when p > base + (sim_ap - sim_an) * slope or when the
/// similarities tie, otherwise -ln p. Throws RoleOrderError when sim_ap < sim_an.
GateResult triplet_loss(double p, double sim_ap, double sim_an, const LossConfig& config = {});

enum class RoleAssignment { FirstPositive, SecondPositive, Equal };

/// Which candidate is more similar to the anchor by ground truth.
RoleAssignment assign_roles(const ImageLabel& anchor, const ImageLabel& first, const ImageLabel& second);

struct TripletRecord {
    int anchor = 0, positive = 0, negative = 0;  // batch indices
    double sim_ap = 0, sim_an = 0;
    double s_ap = 0, s_an = 0;  // descriptor cosines
    double p = 0.5;
    double loss = 0;
    bool gated = false;
    bool tie = false;
};

struct BatchLoss {
    double mean_loss = 0;        // over non-tie assignments
    double gated_fraction = 0;   // gated share of non-tie assignments
    std::size_t assignments = 0; // including ties
    std::size_t non_tie = 0;
    std::vector<TripletRecord> records;
};

/// Loss of one batch; descriptors[i] belongs to labels[i]. Throws BatchSizeError for fewer
/// than three images and CrossSetError when labels span sets.
BatchLoss batch_loss(std::span<const Descriptor> descriptors, std::span<const ImageLabel> labels,
                     const LossConfig& config = {});

/// Images of one set available to the batch sampler.
struct SetImages {
    std::string set_id;
    bool vessel = false;
    std::vector<ImageLabel> images;
};

struct BatchOptions {
    int size = 12;
    /// Choose vessel and non-vessel sets with equal probability before picking a set.
    bool vessel_parity = true;
};

/// Distinct images from one uniformly chosen set, deterministic per seed. Throws
/// SamplingError when vessel parity is on and either kind of set is missing, or when the
/// chosen set is too small.
std::vector<ImageLabel> sample_batch(std::span<const SetImages> sets, std::uint64_t seed,
                                     const BatchOptions& options = {});

}  // namespace matforge::simloss
