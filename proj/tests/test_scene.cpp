#include <doctest.h>

#include <filesystem>
#include <set>
#include <string>

#include "partva/label_map.hpp"
#include "partva/png_io.hpp"
#include "partva/scene.hpp"
#include "partva/taxonomy.hpp"

using namespace partva;

TEST_SUITE("taxonomy") {

TEST_CASE("fine table covers ids 1..31 exactly once") {
    std::set<FineId> ids;
    for (const auto& info : fine_parts()) {
        CHECK(info.id >= 1);
        CHECK(info.id <= kNumFineParts);
        CHECK(ids.insert(info.id).second);
        CHECK(info.aggregate >= 1);
        CHECK(info.aggregate <= kNumAggregateParts);
        CHECK(aggregate_of(info.id) == info.aggregate);
        CHECK(side_of(info.id) == info.side);
    }
    CHECK(ids.size() == kNumFineParts);
    CHECK(aggregate_of(kBackground) == kBackground);
}

TEST_CASE("every aggregate has at least one fine member") {
    std::set<AggregateId> seen;
    for (const auto& info : fine_parts()) seen.insert(info.aggregate);
    CHECK(seen.size() == kNumAggregateParts);
    CHECK(aggregate_parts().size() == kNumAggregateParts);
}

TEST_CASE("names round-trip") {
    for (const auto& info : fine_parts()) {
        auto back = fine_from_name(fine_name(info.id));
        REQUIRE(back.has_value());
        CHECK(*back == info.id);
    }
    for (const auto& info : aggregate_parts()) {
        auto back = aggregate_from_name(aggregate_name(info.id));
        REQUIRE(back.has_value());
        CHECK(*back == info.id);
    }
    CHECK_FALSE(fine_from_name("no-such-part").has_value());
    CHECK_FALSE(aggregate_from_name("no-such-part").has_value());
}

TEST_CASE("mirror_fine is an involution that swaps sides") {
    for (const auto& info : fine_parts()) {
        const FineId m = mirror_fine(info.id);
        CHECK(mirror_fine(m) == info.id);
        CHECK(aggregate_of(m) == info.aggregate);
        switch (info.side) {
            case Side::left: CHECK(side_of(m) == Side::right); break;
            case Side::right: CHECK(side_of(m) == Side::left); break;
            case Side::center: CHECK(m == info.id); break;
        }
    }
}

TEST_CASE("component member sets are pairwise disjoint pairs") {
    std::set<AggregateId> all;
    for (ComponentId c : all_components()) {
        const auto& members = component_members(c);
        CHECK(members.size() == 2);
        for (AggregateId a : members) {
            CHECK(component_contains(c, a));
            CHECK(all.insert(a).second);  // never shared across components
        }
        auto back = component_from_string(to_string(c));
        REQUIRE(back.has_value());
        CHECK(*back == c);
    }
    CHECK(all.size() == 8);
}

TEST_CASE("enum string round-trips") {
    for (CarType t : all_car_types())
        CHECK(car_type_from_string(to_string(t)) == t);
    CHECK(orientation_from_string("left") == Orientation::left);
    CHECK(orientation_from_string("right") == Orientation::right);
    CHECK(granularity_from_string("part") == Granularity::part);
    CHECK(granularity_from_string("piece") == Granularity::piece);
    CHECK_FALSE(car_type_from_string("tricycle").has_value());
}

}  // taxonomy

namespace {

LabelMap left_render(CarType car) {
    return render_whole_car({car, Orientation::left, std::nullopt});
}

std::size_t member_pixels(const LabelMap& m, ComponentId comp) {
    std::size_t n = 0;
    for (std::uint8_t c : m.cells())
        if (c != kBackground && component_contains(comp, aggregate_of(c))) ++n;
    return n;
}

}  // namespace

TEST_SUITE("scene") {

TEST_CASE("renders are deterministic on the fixed canvas") {
    for (CarType car : all_car_types()) {
        const LabelMap m = left_render(car);
        CHECK(m.width() == kSceneWidth);
        CHECK(m.height() == kSceneHeight);
        CHECK(m.space() == LabelSpace::fine);
        CHECK(m == left_render(car));
        CHECK(m.foreground_count() > 0);
    }
}

TEST_CASE("left render shows exactly the left and center labels") {
    for (CarType car : all_car_types()) {
        const LabelMap m = left_render(car);
        for (const auto& info : fine_parts()) {
            if (info.side == Side::right)
                CHECK(m.count(info.id) == 0);
            else
                CHECK(m.count(info.id) > 0);
        }
    }
}

TEST_CASE("every render carries all 13 aggregate parts") {
    for (CarType car : all_car_types()) {
        const LabelMap m = left_render(car);
        std::set<AggregateId> aggs;
        for (std::uint8_t c : m.cells())
            if (c != kBackground) aggs.insert(aggregate_of(c));
        CHECK(aggs.size() == kNumAggregateParts);
    }
}

TEST_CASE("right render is the mirror of the left render") {
    for (CarType car : all_car_types()) {
        const LabelMap l = left_render(car);
        const LabelMap r = render_whole_car({car, Orientation::right, {}});
        CHECK(r == mirrored(l));
        CHECK(mirrored(mirrored(l)) == l);
        CHECK(infer_facing(l) == Orientation::left);
        CHECK(infer_facing(r) == Orientation::right);
    }
}

TEST_CASE("mirroring swaps exactly the sided labels") {
    const LabelMap l = left_render(CarType::wagon);
    const LabelMap r = mirrored(l);
    for (const auto& info : fine_parts())
        CHECK(r.count(info.id) == l.count(mirror_fine(info.id)));
}

TEST_CASE("occlusion swaps member pixels for the near body panel") {
    for (CarType car : all_car_types()) {
        const LabelMap base = left_render(car);
        for (ComponentId comp : all_components()) {
            const LabelMap occ = render_whole_car({car, Orientation::left, comp});
            CHECK(member_pixels(occ, comp) == 0);
            REQUIRE(occ.width() == base.width());
            REQUIRE(occ.height() == base.height());
            for (int y = 0; y < base.height(); ++y) {
                for (int x = 0; x < base.width(); ++x) {
                    const std::uint8_t was = base.at(x, y);
                    const bool member =
                        was != kBackground &&
                        component_contains(comp, aggregate_of(was));
                    if (member)
                        CHECK(occ.at(x, y) == fine::left_body_panel);
                    else
                        CHECK(occ.at(x, y) == was);
                }
            }
        }
    }
}

TEST_CASE("part crops carry every member pixel; pieces cover 40-60%") {
    for (CarType car : all_car_types()) {
        const LabelMap whole = left_render(car);
        for (ComponentId comp : all_components()) {
            const std::size_t total = member_pixels(whole, comp);
            const LabelMap part =
                extract_subregion(whole, {comp, Granularity::part});
            CHECK(member_pixels(part, comp) == total);
            const LabelMap piece =
                extract_subregion(whole, {comp, Granularity::piece});
            const double cover =
                static_cast<double>(member_pixels(piece, comp)) /
                static_cast<double>(total);
            CHECK(cover >= 0.40);
            CHECK(cover <= 0.60);
            CHECK(piece.height() <= part.height());
            CHECK(piece.width() < part.width());
        }
    }
}

TEST_CASE("frozen golden: sedan door-window part crop") {
    const LabelMap whole = left_render(CarType::sedan);
    const LabelMap crop =
        extract_subregion(whole, {ComponentId::door_window, Granularity::part});
    CHECK(crop.width() == 100);
    CHECK(crop.height() == 68);
    CHECK(whole.count(fine::hood) == 508);
    CHECK(whole.count(fine::windshield) == 468);
    CHECK(whole.foreground_count() == 14456);
}

TEST_CASE("subregion extraction commutes with mirroring") {
    for (CarType car : all_car_types()) {
        const LabelMap whole = left_render(car);
        for (ComponentId comp : all_components()) {
            for (Granularity g : {Granularity::part, Granularity::piece}) {
                const SubregionSpec spec{comp, g};
                CHECK(extract_subregion(mirrored(whole), spec) ==
                      mirrored(extract_subregion(whole, spec)));
            }
        }
    }
}

TEST_CASE("the 80 subregion crops are pairwise distinct") {
    std::set<std::string> seen;
    for (CarType car : all_car_types())
        for (Orientation o : {Orientation::left, Orientation::right})
            for (ComponentId comp : all_components())
                for (Granularity g : {Granularity::part, Granularity::piece}) {
                    const LabelMap whole = render_whole_car({car, o, {}});
                    seen.insert(to_valm(extract_subregion(whole, {comp, g})));
                }
    CHECK(seen.size() == 5 * 2 * 4 * 2);
}

TEST_CASE("aggregation preserves label mass") {
    const LabelMap fine_map = left_render(CarType::truck);
    const LabelMap agg = aggregated(fine_map);
    CHECK(agg.space() == LabelSpace::aggregate);
    CHECK(agg.width() == fine_map.width());
    CHECK(agg.foreground_count() == fine_map.foreground_count());
    for (const auto& info : aggregate_parts()) {
        std::size_t from_fine = 0;
        for (const auto& f : fine_parts())
            if (f.aggregate == info.id) from_fine += fine_map.count(f.id);
        CHECK(agg.count(info.id) == from_fine);
    }
}

TEST_CASE("valm text round-trip") {
    const LabelMap whole = left_render(CarType::minivan);
    const LabelMap crop = extract_subregion(
        whole, {ComponentId::headlight_wheel, Granularity::piece});
    for (const LabelMap* m : {&whole, &crop}) {
        const LabelMap back = from_valm(to_valm(*m));
        CHECK(back == *m);
    }
    const auto file = std::filesystem::temp_directory_path() / "partva_rt.valm";
    save_valm(whole, file);
    CHECK(load_valm(file) == whole);
    std::filesystem::remove(file);
    CHECK_THROWS(from_valm("VALM9 2 2\n0 0\n0 0\n"));
    CHECK_THROWS(from_valm("VALM1 2 2\n0 0\n0\n"));
}

TEST_CASE("fnv1a64 matches the published test vectors") {
    CHECK(fnv1a64("") == 0xCBF29CE484222325ull);
    CHECK(fnv1a64("a") == 0xAF63DC4C8601EC8Cull);
    CHECK(to_hex(0xAF63DC4C8601EC8Cull) == "af63dc4c8601ec8c");
}

TEST_CASE("png export: paletted bytes for any map") {
    const LabelMap m = left_render(CarType::suv);
    const std::string bytes = png_bytes(m, 2);
    REQUIRE(bytes.size() > 8);
    CHECK(bytes.compare(0, 8, "\x89PNG\r\n\x1A\n", 8) == 0);
    const auto& pal = label_palette();
    CHECK(pal.size() == kNumAggregateParts + 1);
    std::set<std::tuple<int, int, int>> distinct;
    for (const Rgb& c : pal) distinct.insert({c.r, c.g, c.b});
    CHECK(distinct.size() == pal.size());
}

}  // scene
