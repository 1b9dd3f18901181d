#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string_view>

#include "partva/label_map.hpp"
#include "partva/taxonomy.hpp"

namespace partva {

inline constexpr int kPartBlockDim = kNumAggregateParts;  // 13
inline constexpr int kTypeBlockDim = kNumCarTypes;        // 5
inline constexpr int kFeatureDim = kPartBlockDim + kTypeBlockDim;  // 18

// Nonnegative scores over the five car types, summing to 1.
struct CarTypePrediction {
    std::array<double, kTypeBlockDim> scores{};

    static CarTypePrediction one_hot(CarType t) {
        CarTypePrediction p;
        p.scores[static_cast<int>(t)] = 1.0;
        return p;
    }
    static CarTypePrediction uniform() {
        CarTypePrediction p;
        p.scores.fill(1.0 / kTypeBlockDim);
        return p;
    }
};

// 18-dim image description: 13 aggregate-part pixel proportions followed by
// the 5 car-type scores. Both blocks sum to 1 for nonempty maps.
struct FeatureVector {
    std::array<double, kFeatureDim> values{};

    std::span<const double, kPartBlockDim> part_block() const {
        return std::span<const double, kPartBlockDim>(values.data(), kPartBlockDim);
    }
    std::span<const double, kTypeBlockDim> type_block() const {
        return std::span<const double, kTypeBlockDim>(
            values.data() + kPartBlockDim, kTypeBlockDim);
    }
};

// Part proportions are over foreground pixels. A map with no foreground
// pixels yields an all-zero part block and a uniform type block (the blank
// convention that the two-term ablation relies on).
FeatureVector extract_features(const LabelMap& map,
                               const CarTypePrediction& prediction);

// 1 - cos(u, v), in [0, 2]. Returns 1 when either vector has zero norm.
double cosine_distance(std::span<const double> u, std::span<const double> v);

struct PcmDecision {
    int chosen_index = 0;
    std::array<double, 4> distances{};
};

// The seven feature vectors are ordered A, B, C, D1..D4. Picks the option
// minimizing cosine_distance(f_B - f_A, f_Di - f_C); ties go to the lowest
// index.
PcmDecision solve_pcm(const std::array<FeatureVector, 7>& features);

// CSV row "problem_id,role,v1,...,v18" with 9 significant digits.
void append_feature_csv(std::ostream& out, std::string_view problem_id,
                        std::string_view role, const FeatureVector& f);

}  // namespace partva
