#include <doctest.h>

#include <set>
#include <vector>

#include "partva/noise.hpp"
#include "partva/problem.hpp"
#include "partva/rng.hpp"
#include "partva/scene.hpp"

using namespace partva;

namespace {

LabelMap sedan_left() {
    return render_whole_car({CarType::sedan, Orientation::left, std::nullopt});
}

std::vector<LabelMap> varied_maps(int n) {
    std::vector<LabelMap> maps;
    maps.reserve(n);
    for (int i = 0; i < n; ++i) {
        const CarType car = all_car_types()[i % kNumCarTypes];
        const Orientation o =
            (i / 5) % 2 == 0 ? Orientation::left : Orientation::right;
        std::optional<ComponentId> occ;
        if (i % 4 == 3) occ = all_components()[(i / 20) % kNumComponents];
        maps.push_back(render_whole_car({car, o, occ}));
    }
    return maps;
}

}  // namespace

TEST_SUITE("noise") {

TEST_CASE("flip rate zero is the identity") {
    const LabelMap m = sedan_left();
    rng::SplitMix64 s(99);
    CHECK(corrupt_segmentation(m, 0.0, 2, s) == m);
}

TEST_CASE("rate one flips every in-band foreground pixel to a window label") {
    const LabelMap m = sedan_left();
    rng::SplitMix64 s(4);
    const int band = 3;
    const LabelMap out = corrupt_segmentation(m, 1.0, band, s);
    REQUIRE(out.width() == m.width());
    int flipped = 0;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            const std::uint8_t was = m.at(x, y);
            if (was == kBackground) {
                CHECK(out.at(x, y) == kBackground);  // background never flips
                continue;
            }
            bool in_band = false;
            std::set<std::uint8_t> window = {kBackground};
            for (int dy = -band; dy <= band; ++dy)
                for (int dx = -band; dx <= band; ++dx)
                    if (m.in_bounds(x + dx, y + dy)) {
                        window.insert(m.at(x + dx, y + dy));
                        if (m.at(x + dx, y + dy) != was) in_band = true;
                    }
            if (in_band) {
                ++flipped;
                CHECK(out.at(x, y) != was);
                CHECK(window.count(out.at(x, y)) == 1);
            } else {
                CHECK(out.at(x, y) == was);
            }
        }
    }
    CHECK(flipped > 0);
    CHECK(miou(out, m) < 1.0);
}

TEST_CASE("corruption is reproducible and seed-sensitive") {
    const LabelMap m = sedan_left();
    rng::SplitMix64 s1(7), s2(7), s3(8);
    const LabelMap a = corrupt_segmentation(m, 0.5, 2, s1);
    const LabelMap b = corrupt_segmentation(m, 0.5, 2, s2);
    const LabelMap c = corrupt_segmentation(m, 0.5, 2, s3);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("flips at a lower rate are a subset of flips at a higher rate") {
    const LabelMap m = sedan_left();
    rng::SplitMix64 lo_s(31), hi_s(31);
    const LabelMap lo = corrupt_segmentation(m, 0.3, 2, lo_s);
    const LabelMap hi = corrupt_segmentation(m, 0.7, 2, hi_s);
    for (std::size_t i = 0; i < m.cells().size(); ++i)
        if (lo.cells()[i] != m.cells()[i])
            CHECK(hi.cells()[i] == lo.cells()[i]);
}

TEST_CASE("mean miou is non-increasing over the rate grid") {
    const std::vector<LabelMap> maps = varied_maps(200);
    double prev = 1.0;
    for (double rate : {0.0, 0.1, 0.2, 0.4}) {
        double total = 0.0;
        for (std::size_t i = 0; i < maps.size(); ++i) {
            rng::SplitMix64 s(rng::split(17, i));
            total += miou(corrupt_segmentation(maps[i], rate, 2, s), maps[i]);
        }
        const double mean = total / maps.size();
        CHECK(mean <= prev + 0.02);
        prev = mean;
    }
}

TEST_CASE("miou identity, disjointness, and the hand-counted 0.6") {
    const LabelMap m = sedan_left();
    CHECK(miou(m, m) == doctest::Approx(1.0));

    LabelMap left(4, 1, LabelSpace::aggregate), right(4, 1, LabelSpace::aggregate);
    left.set(0, 0, agg::door);
    left.set(1, 0, agg::door);
    right.set(2, 0, agg::door);
    right.set(3, 0, agg::door);
    // door IoU 0, background IoU 0 -> mean 0
    CHECK(miou(right, left) == doctest::Approx(0.0));

    // truth: 8 door pixels then 8 background; predicted door covers 6 of
    // the true 8 plus 2 background pixels. IoU(door) = 6/10, IoU(bg) = 6/10.
    LabelMap truth(16, 1, LabelSpace::aggregate), pred(16, 1, LabelSpace::aggregate);
    truth.fill_rect(0, 0, 8, 1, agg::door);
    pred.fill_rect(0, 0, 6, 1, agg::door);
    pred.fill_rect(8, 0, 10, 1, agg::door);
    CHECK(miou(pred, truth) == doctest::Approx(0.6));
}

TEST_CASE("miou averages only labels present in truth, mixes spaces") {
    // Truth is all door; prediction wanders into window, which must not
    // contribute a term of its own.
    LabelMap truth(4, 1, LabelSpace::aggregate), pred(4, 1, LabelSpace::aggregate);
    truth.fill_rect(0, 0, 4, 1, agg::door);
    pred.fill_rect(0, 0, 3, 1, agg::door);
    pred.set(3, 0, agg::window);
    CHECK(miou(pred, truth) == doctest::Approx(0.75));

    // Fine-space prediction against its own aggregation: exact match.
    const LabelMap fine_map = sedan_left();
    CHECK(miou(fine_map, aggregated(fine_map)) == doctest::Approx(1.0));
    CHECK_THROWS(miou(LabelMap(2, 2), LabelMap(3, 2)));
}

TEST_CASE("classifier simulation is one-hot at the configured rates") {
    NoiseProfile prof;
    prof.cls_accuracy_whole = 0.99;
    prof.cls_accuracy_subregion = 0.71;
    rng::SplitMix64 stream(123);
    int whole_hits = 0, sub_hits = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const CarType truth = all_car_types()[i % kNumCarTypes];
        const CarTypePrediction w =
            simulate_classifier(truth, ImageKind::whole, prof, stream);
        const CarTypePrediction s =
            simulate_classifier(truth, ImageKind::subregion, prof, stream);
        for (const CarTypePrediction* p : {&w, &s}) {
            int ones = 0;
            for (double v : p->scores) {
                CHECK((v == 0.0 || v == 1.0));
                if (v == 1.0) ++ones;
            }
            CHECK(ones == 1);
        }
        if (w.scores[static_cast<int>(truth)] == 1.0) ++whole_hits;
        if (s.scores[static_cast<int>(truth)] == 1.0) ++sub_hits;
    }
    CHECK(whole_hits / double(draws) == doctest::Approx(0.99).epsilon(0.011));
    CHECK(sub_hits / double(draws) == doctest::Approx(0.71).epsilon(0.029));

    prof.cls_accuracy_whole = 1.0;
    prof.cls_accuracy_subregion = 0.0;
    for (int i = 0; i < 50; ++i) {
        CHECK(simulate_classifier(CarType::suv, ImageKind::whole, prof, stream)
                  .scores[static_cast<int>(CarType::suv)] == 1.0);
        CHECK(simulate_classifier(CarType::suv, ImageKind::subregion, prof,
                                  stream)
                  .scores[static_cast<int>(CarType::suv)] == 0.0);
    }
}

TEST_CASE("effective flip rate stacks extras and clamps") {
    NoiseProfile prof;
    prof.flip_rate_base = 0.5;
    prof.extra_different_orientation = 0.15;
    prof.extra_invisible = 0.07;
    prof.extra_piece = 0.03;
    const Condition easy{true, true, Granularity::part};
    const Condition hard{false, false, Granularity::piece};
    CHECK(effective_flip_rate(prof, easy) == doctest::Approx(0.5));
    CHECK(effective_flip_rate(prof, hard) == doctest::Approx(0.75));
    prof.flip_rate_base = 0.9;
    CHECK(effective_flip_rate(prof, hard) == doctest::Approx(1.0));
    const Condition diff_only{false, true, Granularity::part};
    CHECK(effective_flip_rate(prof, diff_only) == doctest::Approx(1.0));
}

TEST_CASE("noise profile json round-trip") {
    NoiseProfile prof;
    prof.flip_rate_base = 0.37;
    prof.boundary_band = 4;
    prof.extra_piece = 0.11;
    prof.cls_accuracy_subregion = 0.66;
    prof.seed = 99;
    CHECK(noise_profile_from_json(to_json(prof)) == prof);
}

TEST_CASE("calibration hits reachable targets and flags unreachable ones") {
    NoiseProfile base;
    base.seed = 11;
    const std::vector<LabelMap> sample = varied_maps(24);

    const CalibrationResult exact = calibrate_noise(1.0, sample, base);
    CHECK(exact.converged);
    CHECK(exact.profile.flip_rate_base == doctest::Approx(0.0));

    const CalibrationResult fit = calibrate_noise(0.57, sample, base);
    CHECK(fit.converged);
    CHECK(fit.achieved == doctest::Approx(0.57).epsilon(0.02));
    // Held-out validation on maps the fit never saw.
    const std::vector<LabelMap> held = varied_maps(60);
    double total = 0.0;
    for (std::size_t i = 0; i < held.size(); ++i) {
        rng::SplitMix64 s(rng::split(123, i));
        total += miou(corrupt_segmentation(held[i],
                                           fit.profile.flip_rate_base,
                                           fit.profile.boundary_band, s),
                      held[i]);
    }
    CHECK(total / held.size() == doctest::Approx(0.57).epsilon(0.035));

    const CalibrationResult impossible = calibrate_noise(0.05, sample, base);
    CHECK_FALSE(impossible.converged);
    CHECK(impossible.profile.flip_rate_base == doctest::Approx(1.0));
    CHECK(impossible.achieved > 0.05);
}

}  // noise
