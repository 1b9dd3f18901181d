#pragma once

#include <array>
#include <span>

#include "partva/features.hpp"
#include "partva/label_map.hpp"
#include "partva/problem.hpp"
#include "partva/rng.hpp"

namespace partva {

enum class ShortcutMetric { cosine, hamming };

std::string_view to_string(ShortcutMetric m);
ShortcutMetric shortcut_metric_from_string(std::string_view s);

// Fraction of differing cells with both maps anchored at the top-left of a
// common canvas and background-padded. Maps must share a label space.
double hamming_distance(const LabelMap& a, const LabelMap& b);

// Picks the option most similar to B, ignoring the A:C pair entirely.
// Similarity is cosine distance over features by default, or raw-cell
// Hamming distance as a sensitivity toggle. Options whose label map equals
// B's cell for cell are excluded (they would win trivially); problem
// invariants guarantee at least one option survives, so exhausting all four
// is an internal error. Distances are reported for all options regardless of
// exclusion; ties break toward the lowest index.
PcmDecision solve_shortcut(const LabelMap& b,
                           std::span<const LabelMap> options,
                           const FeatureVector& f_b,
                           std::span<const FeatureVector> f_options,
                           ShortcutMetric metric = ShortcutMetric::cosine);

// Uniform guess over the four options.
int solve_random(rng::SplitMix64& stream);

// Replaces A and C with all-background maps of the same dimensions, leaving
// every other field untouched. Idempotent.
AnalogyProblem ablate_two_term(AnalogyProblem problem);

// The feature vector every blank map maps to (zero part block, uniform type
// block). Solving an ablated problem with the four-term rule reduces to
// comparing f_B - blank against f_Di - blank.
FeatureVector blank_features();

}  // namespace partva
