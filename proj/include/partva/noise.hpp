#pragma once

#include <cstdint>
#include <span>

#include <json.hpp>

#include "partva/features.hpp"
#include "partva/label_map.hpp"
#include "partva/problem.hpp"
#include "partva/rng.hpp"
#include "partva/taxonomy.hpp"

namespace partva {

// Imperfect-perception knobs. The flip rate is the probability that a pixel
// inside the boundary band gets relabeled; condition extras stack on top of
// the base rate.
struct NoiseProfile {
    double flip_rate_base = 0.0;
    int boundary_band = 2;
    double extra_different_orientation = 0.15;
    double extra_invisible = 0.07;
    double extra_piece = 0.03;
    double cls_accuracy_whole = 1.0;
    double cls_accuracy_subregion = 1.0;
    std::uint64_t seed = 0;

    bool operator==(const NoiseProfile&) const = default;
};

nlohmann::ordered_json to_json(const NoiseProfile& profile);
NoiseProfile noise_profile_from_json(const nlohmann::json& j);

// Base rate plus the extras triggered by the condition, clamped to [0, 1].
double effective_flip_rate(const NoiseProfile& profile, const Condition& cond);

// Relabels foreground boundary-band pixels at the given rate; background
// never flips. A pixel is in the band if any pixel within Chebyshev distance
// `boundary_band` carries a different label. Every in-band foreground pixel
// consumes exactly two draws (flip decision + replacement pick) whether or
// not it flips, so the flipped set at a lower rate is a subset of the flipped
// set at a higher rate on the same stream. Replacement labels are drawn
// uniformly from the distinct labels in the window plus background, excluding
// the pixel's own label. Decisions are made against the uncorrupted input.
LabelMap corrupt_segmentation(const LabelMap& map, double flip_rate,
                              int boundary_band, rng::SplitMix64& stream);
LabelMap corrupt_segmentation(const LabelMap& map, const NoiseProfile& profile,
                              const Condition& cond, rng::SplitMix64& stream);

enum class ImageKind { whole, subregion };

// Returns the true type with the kind's accuracy, otherwise a uniformly
// chosen wrong type. Always consumes exactly two draws.
CarTypePrediction simulate_classifier(CarType truth, ImageKind kind,
                                      const NoiseProfile& profile,
                                      rng::SplitMix64& stream);

// Mean intersection-over-union across the aggregate labels present in the
// truth map (background included). Both maps are aggregated first, so fine
// and aggregate inputs may be mixed. Requires matching dimensions.
double miou(const LabelMap& predicted, const LabelMap& truth);

struct CalibrationResult {
    NoiseProfile profile;    // base profile with flip_rate_base replaced
    double achieved = 0.0;   // mean mIoU at the returned rate
    bool converged = false;  // |achieved - target| <= tolerance
    int iterations = 0;      // mIoU evaluations performed
};

// Bisects flip_rate_base until the mean mIoU over the sample reaches the
// target. Map i is corrupted with stream split(base.seed, i), so repeated
// evaluations are coupled and the objective is monotone in the rate. If even
// rate 1 leaves the mIoU above the target, the result carries rate 1 with
// converged = false.
CalibrationResult calibrate_noise(double target_miou,
                                  std::span<const LabelMap> sample,
                                  const NoiseProfile& base,
                                  int max_iterations = 30,
                                  double tolerance = 0.01);

}  // namespace partva
