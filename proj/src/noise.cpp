#include "partva/noise.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace partva {

nlohmann::ordered_json to_json(const NoiseProfile& p) {
    nlohmann::ordered_json j;
    j["flip_rate_base"] = p.flip_rate_base;
    j["boundary_band"] = p.boundary_band;
    j["extra_different_orientation"] = p.extra_different_orientation;
    j["extra_invisible"] = p.extra_invisible;
    j["extra_piece"] = p.extra_piece;
    j["cls_accuracy_whole"] = p.cls_accuracy_whole;
    j["cls_accuracy_subregion"] = p.cls_accuracy_subregion;
    j["seed"] = p.seed;
    return j;
}

NoiseProfile noise_profile_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::runtime_error("noise profile: expected an object");
    NoiseProfile p;
    p.flip_rate_base = j.value("flip_rate_base", p.flip_rate_base);
    p.boundary_band = j.value("boundary_band", p.boundary_band);
    p.extra_different_orientation =
        j.value("extra_different_orientation", p.extra_different_orientation);
    p.extra_invisible = j.value("extra_invisible", p.extra_invisible);
    p.extra_piece = j.value("extra_piece", p.extra_piece);
    p.cls_accuracy_whole = j.value("cls_accuracy_whole", p.cls_accuracy_whole);
    p.cls_accuracy_subregion =
        j.value("cls_accuracy_subregion", p.cls_accuracy_subregion);
    p.seed = j.value("seed", p.seed);
    for (double rate : {p.flip_rate_base, p.cls_accuracy_whole, p.cls_accuracy_subregion})
        if (rate < 0.0 || rate > 1.0)
            throw std::runtime_error("noise profile: rates must be in [0, 1]");
    if (p.boundary_band < 0)
        throw std::runtime_error("noise profile: boundary_band must be >= 0");
    return p;
}

double effective_flip_rate(const NoiseProfile& p, const Condition& c) {
    double rate = p.flip_rate_base;
    if (!c.orientation_same) rate += p.extra_different_orientation;
    if (!c.visible) rate += p.extra_invisible;
    if (c.granularity == Granularity::piece) rate += p.extra_piece;
    return std::clamp(rate, 0.0, 1.0);
}

LabelMap corrupt_segmentation(const LabelMap& map, double flip_rate,
                              int boundary_band, rng::SplitMix64& stream) {
    if (flip_rate < 0.0 || flip_rate > 1.0)
        throw std::invalid_argument("flip_rate must be in [0, 1]");
    if (boundary_band < 0)
        throw std::invalid_argument("boundary_band must be >= 0");

    LabelMap out = map;
    std::vector<std::uint8_t> candidates;
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            const std::uint8_t center = map.at(x, y);
            if (center == kBackground) continue;  // only foreground flips
            const int x0 = std::max(0, x - boundary_band);
            const int x1 = std::min(map.width() - 1, x + boundary_band);
            const int y0 = std::max(0, y - boundary_band);
            const int y1 = std::min(map.height() - 1, y + boundary_band);

            // Distinct window labels plus background, minus the pixel's own.
            std::array<bool, 256> seen{};
            seen[kBackground] = true;
            bool in_band = false;
            for (int wy = y0; wy <= y1; ++wy)
                for (int wx = x0; wx <= x1; ++wx) {
                    const std::uint8_t l = map.at(wx, wy);
                    seen[l] = true;
                    in_band |= (l != center);
                }
            if (!in_band) continue;

            candidates.clear();
            for (int l = 0; l < 256; ++l)
                if (seen[l] && l != center)
                    candidates.push_back(static_cast<std::uint8_t>(l));

            // Both draws happen unconditionally to keep streams aligned
            // across flip rates.
            const bool flip = stream.uniform01() < flip_rate;
            const std::uint64_t pick = stream.below(candidates.size());
            if (flip) out.set(x, y, candidates[static_cast<std::size_t>(pick)]);
        }
    }
    return out;
}

LabelMap corrupt_segmentation(const LabelMap& map, const NoiseProfile& profile,
                              const Condition& cond, rng::SplitMix64& stream) {
    return corrupt_segmentation(map, effective_flip_rate(profile, cond),
                                profile.boundary_band, stream);
}

CarTypePrediction simulate_classifier(CarType truth, ImageKind kind,
                                      const NoiseProfile& profile,
                                      rng::SplitMix64& stream) {
    const double accuracy = kind == ImageKind::whole
                                ? profile.cls_accuracy_whole
                                : profile.cls_accuracy_subregion;
    const bool correct = stream.uniform01() < accuracy;
    std::uint64_t wrong = stream.below(kNumCarTypes - 1);
    if (correct) return CarTypePrediction::one_hot(truth);
    if (wrong >= static_cast<std::uint64_t>(truth)) ++wrong;
    return CarTypePrediction::one_hot(static_cast<CarType>(wrong));
}

double miou(const LabelMap& predicted, const LabelMap& truth) {
    if (predicted.width() != truth.width() || predicted.height() != truth.height())
        throw std::invalid_argument("miou: dimension mismatch");
    const auto as_aggregate = [](const LabelMap& m) {
        return m.space() == LabelSpace::aggregate ? m : aggregated(m);
    };
    const LabelMap pred_agg = as_aggregate(predicted);
    const LabelMap truth_agg = as_aggregate(truth);

    constexpr int kLabels = kNumAggregateParts + 1;  // background + 13
    std::array<std::uint64_t, kLabels> inter{};
    std::array<std::uint64_t, kLabels> uni{};
    std::array<bool, kLabels> in_truth{};
    for (int y = 0; y < truth_agg.height(); ++y)
        for (int x = 0; x < truth_agg.width(); ++x) {
            const std::uint8_t t = truth_agg.at(x, y);
            const std::uint8_t p = pred_agg.at(x, y);
            in_truth[t] = true;
            if (t == p) {
                ++inter[t];
                ++uni[t];
            } else {
                ++uni[t];
                ++uni[p];
            }
        }

    double sum = 0.0;
    int labels = 0;
    for (int l = 0; l < kLabels; ++l) {
        if (!in_truth[l]) continue;
        sum += static_cast<double>(inter[l]) / static_cast<double>(uni[l]);
        ++labels;
    }
    return sum / static_cast<double>(labels);
}

namespace {

double mean_miou_at(double rate, std::span<const LabelMap> sample,
                    const NoiseProfile& base) {
    double sum = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        rng::SplitMix64 stream(rng::split(base.seed, static_cast<std::uint64_t>(i)));
        const LabelMap noisy =
            corrupt_segmentation(sample[i], rate, base.boundary_band, stream);
        sum += miou(noisy, sample[i]);
    }
    return sum / static_cast<double>(sample.size());
}

}  // namespace

CalibrationResult calibrate_noise(double target_miou,
                                  std::span<const LabelMap> sample,
                                  const NoiseProfile& base, int max_iterations,
                                  double tolerance) {
    if (sample.empty())
        throw std::invalid_argument("calibrate_noise: empty sample");
    if (target_miou <= 0.0 || target_miou > 1.0)
        throw std::invalid_argument("calibrate_noise: target must be in (0, 1]");

    CalibrationResult result;
    result.profile = base;

    auto finish = [&](double rate, double achieved) {
        result.profile.flip_rate_base = rate;
        result.achieved = achieved;
        result.converged = std::abs(achieved - target_miou) <= tolerance;
        return result;
    };

    double lo = 0.0;
    double hi = 1.0;
    double m_lo = mean_miou_at(lo, sample, base);
    ++result.iterations;
    if (std::abs(m_lo - target_miou) <= tolerance || result.iterations >= max_iterations)
        return finish(lo, m_lo);

    double m_hi = mean_miou_at(hi, sample, base);
    ++result.iterations;
    // mIoU falls as the rate rises; if the floor is still above target the
    // closest achievable point is rate 1.
    if (m_hi > target_miou + tolerance || result.iterations >= max_iterations)
        return finish(hi, m_hi);
    if (std::abs(m_hi - target_miou) <= tolerance) return finish(hi, m_hi);

    double best_rate = m_lo >= m_hi ? lo : hi;
    double best_val = m_lo >= m_hi ? m_lo : m_hi;
    while (result.iterations < max_iterations) {
        const double mid = 0.5 * (lo + hi);
        const double m_mid = mean_miou_at(mid, sample, base);
        ++result.iterations;
        if (std::abs(m_mid - target_miou) < std::abs(best_val - target_miou)) {
            best_rate = mid;
            best_val = m_mid;
        }
        if (std::abs(m_mid - target_miou) <= tolerance) return finish(mid, m_mid);
        if (m_mid > target_miou)
            lo = mid;
        else
            hi = mid;
    }
    return finish(best_rate, best_val);
}

}  // namespace partva
