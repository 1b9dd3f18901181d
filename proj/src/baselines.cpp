#include "partva/baselines.hpp"

#include <algorithm>
#include <stdexcept>

namespace partva {

std::string_view to_string(ShortcutMetric m) {
    return m == ShortcutMetric::cosine ? "cosine" : "hamming";
}

ShortcutMetric shortcut_metric_from_string(std::string_view s) {
    if (s == "cosine") return ShortcutMetric::cosine;
    if (s == "hamming") return ShortcutMetric::hamming;
    throw std::runtime_error("unknown shortcut metric: " + std::string(s));
}

double hamming_distance(const LabelMap& a, const LabelMap& b) {
    if (a.space() != b.space())
        throw std::invalid_argument("hamming_distance: label space mismatch");
    const int w = std::max(a.width(), b.width());
    const int h = std::max(a.height(), b.height());
    if (w == 0 || h == 0)
        throw std::invalid_argument("hamming_distance: empty maps");
    std::uint64_t differing = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::uint8_t la = a.in_bounds(x, y) ? a.at(x, y) : kBackground;
            const std::uint8_t lb = b.in_bounds(x, y) ? b.at(x, y) : kBackground;
            differing += la != lb;
        }
    return static_cast<double>(differing) / (static_cast<double>(w) * h);
}

PcmDecision solve_shortcut(const LabelMap& b,
                           std::span<const LabelMap> options,
                           const FeatureVector& f_b,
                           std::span<const FeatureVector> f_options,
                           ShortcutMetric metric) {
    if (options.size() != 4 || f_options.size() != 4)
        throw std::invalid_argument("solve_shortcut: expected 4 options");

    PcmDecision decision;
    int best = -1;
    for (std::size_t i = 0; i < 4; ++i) {
        decision.distances[i] =
            metric == ShortcutMetric::cosine
                ? cosine_distance(f_b.values, f_options[i].values)
                : hamming_distance(b, options[i]);
        if (options[i] == b) continue;
        if (best < 0 || decision.distances[i] < decision.distances[best])
            best = static_cast<int>(i);
    }
    if (best < 0)
        throw std::logic_error(
            "solve_shortcut: every option is identical to B");
    decision.chosen_index = best;
    return decision;
}

int solve_random(rng::SplitMix64& stream) {
    return static_cast<int>(stream.below(4));
}

AnalogyProblem ablate_two_term(AnalogyProblem problem) {
    problem.a = LabelMap(problem.a.width(), problem.a.height(), problem.a.space());
    problem.c = LabelMap(problem.c.width(), problem.c.height(), problem.c.space());
    return problem;
}

FeatureVector blank_features() {
    FeatureVector blank;
    for (int i = 0; i < kTypeBlockDim; ++i)
        blank.values[kPartBlockDim + i] = 1.0 / kTypeBlockDim;
    return blank;
}

}  // namespace partva
