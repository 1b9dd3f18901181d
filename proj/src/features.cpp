#include "partva/features.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace partva {

FeatureVector extract_features(const LabelMap& map,
                               const CarTypePrediction& prediction) {
    std::array<std::size_t, kPartBlockDim + 1> counts{};
    for (std::uint8_t cell : map.cells()) {
        const AggregateId a = map.space() == LabelSpace::aggregate
                                  ? cell
                                  : aggregate_of(cell);
        ++counts[a];
    }
    const std::size_t foreground = map.cells().size() - counts[kBackground];

    FeatureVector f;
    if (foreground == 0) {
        const CarTypePrediction blank = CarTypePrediction::uniform();
        for (int k = 0; k < kTypeBlockDim; ++k)
            f.values[kPartBlockDim + k] = blank.scores[k];
        return f;
    }
    for (int k = 0; k < kPartBlockDim; ++k)
        f.values[k] = static_cast<double>(counts[k + 1]) /
                      static_cast<double>(foreground);
    for (int k = 0; k < kTypeBlockDim; ++k)
        f.values[kPartBlockDim + k] = prediction.scores[k];
    return f;
}

double cosine_distance(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size())
        throw std::invalid_argument("cosine_distance: dimension mismatch");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) return 1.0;
    return 1.0 - dot / (std::sqrt(nu) * std::sqrt(nv));
}

PcmDecision solve_pcm(const std::array<FeatureVector, 7>& features) {
    std::array<double, kFeatureDim> source_diff;
    for (int k = 0; k < kFeatureDim; ++k)
        source_diff[k] = features[1].values[k] - features[0].values[k];

    PcmDecision decision;
    for (int i = 0; i < 4; ++i) {
        std::array<double, kFeatureDim> target_diff;
        for (int k = 0; k < kFeatureDim; ++k)
            target_diff[k] = features[3 + i].values[k] - features[2].values[k];
        decision.distances[i] = cosine_distance(source_diff, target_diff);
    }
    decision.chosen_index = 0;
    for (int i = 1; i < 4; ++i)
        if (decision.distances[i] < decision.distances[decision.chosen_index])
            decision.chosen_index = i;
    return decision;
}

void append_feature_csv(std::ostream& out, std::string_view problem_id,
                        std::string_view role, const FeatureVector& f) {
    out << problem_id << ',' << role;
    char buf[32];
    for (double v : f.values) {
        std::snprintf(buf, sizeof(buf), "%.9g", v);
        out << ',' << buf;
    }
    out << '\n';
}

}  // namespace partva
