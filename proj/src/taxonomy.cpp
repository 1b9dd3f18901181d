#include "partva/taxonomy.hpp"

#include <stdexcept>

namespace partva {

namespace {

constexpr std::array<FinePartInfo, kNumFineParts> kFineParts = {{
    {fine::front_left_door, "front-left-door", Side::left, agg::door},
    {fine::front_right_door, "front-right-door", Side::right, agg::door},
    {fine::back_left_door, "back-left-door", Side::left, agg::door},
    {fine::back_right_door, "back-right-door", Side::right, agg::door},
    {fine::front_left_window, "front-left-window", Side::left, agg::window},
    {fine::front_right_window, "front-right-window", Side::right, agg::window},
    {fine::back_left_window, "back-left-window", Side::left, agg::window},
    {fine::back_right_window, "back-right-window", Side::right, agg::window},
    {fine::windshield, "windshield", Side::center, agg::windshield},
    {fine::rear_window, "rear-window", Side::center, agg::window},
    {fine::hood, "hood", Side::center, agg::hood},
    {fine::trunk, "trunk", Side::center, agg::trunk},
    {fine::roof, "roof", Side::center, agg::roof},
    {fine::left_mirror, "left-mirror", Side::left, agg::mirror},
    {fine::right_mirror, "right-mirror", Side::right, agg::mirror},
    {fine::front_bumper, "front-bumper", Side::center, agg::bumper},
    {fine::back_bumper, "back-bumper", Side::center, agg::bumper},
    {fine::front_left_wheel, "front-left-wheel", Side::left, agg::wheel},
    {fine::front_right_wheel, "front-right-wheel", Side::right, agg::wheel},
    {fine::back_left_wheel, "back-left-wheel", Side::left, agg::wheel},
    {fine::back_right_wheel, "back-right-wheel", Side::right, agg::wheel},
    {fine::left_headlight, "left-headlight", Side::left, agg::headlight},
    {fine::right_headlight, "right-headlight", Side::right, agg::headlight},
    {fine::left_taillight, "left-taillight", Side::left, agg::taillight},
    {fine::right_taillight, "right-taillight", Side::right, agg::taillight},
    {fine::front_plate, "front-plate", Side::center, agg::plate},
    {fine::back_plate, "back-plate", Side::center, agg::plate},
    {fine::grille, "grille", Side::center, agg::body},
    {fine::left_body_panel, "left-body-panel", Side::left, agg::body},
    {fine::right_body_panel, "right-body-panel", Side::right, agg::body},
    {fine::chassis, "chassis", Side::center, agg::body},
}};

constexpr std::array<AggregatePartInfo, kNumAggregateParts> kAggregateParts = {{
    {agg::door, "door"},
    {agg::window, "window"},
    {agg::windshield, "windshield"},
    {agg::hood, "hood"},
    {agg::trunk, "trunk"},
    {agg::roof, "roof"},
    {agg::mirror, "mirror"},
    {agg::bumper, "bumper"},
    {agg::wheel, "wheel"},
    {agg::headlight, "headlight"},
    {agg::taillight, "taillight"},
    {agg::plate, "plate"},
    {agg::body, "body"},
}};

// Left<->right pairing, indexed by fine id. Center labels map to themselves.
constexpr std::array<FineId, kNumFineParts + 1> kMirror = {
    0,
    fine::front_right_door, fine::front_left_door,
    fine::back_right_door,  fine::back_left_door,
    fine::front_right_window, fine::front_left_window,
    fine::back_right_window,  fine::back_left_window,
    fine::windshield, fine::rear_window, fine::hood, fine::trunk, fine::roof,
    fine::right_mirror, fine::left_mirror,
    fine::front_bumper, fine::back_bumper,
    fine::front_right_wheel, fine::front_left_wheel,
    fine::back_right_wheel,  fine::back_left_wheel,
    fine::right_headlight, fine::left_headlight,
    fine::right_taillight, fine::left_taillight,
    fine::front_plate, fine::back_plate, fine::grille,
    fine::right_body_panel, fine::left_body_panel,
    fine::chassis,
};

constexpr std::array<std::array<AggregateId, 2>, kNumComponents> kComponentMembers = {{
    {agg::door, agg::window},
    {agg::hood, agg::windshield},
    {agg::trunk, agg::bumper},
    {agg::headlight, agg::wheel},
}};

constexpr std::array<std::string_view, kNumComponents> kComponentNames = {
    "door-window", "hood-windshield", "trunk-bumper", "headlight-wheel"};

constexpr std::array<std::string_view, kNumCarTypes> kCarNames = {
    "sedan", "suv", "wagon", "truck", "minivan"};

void check_fine(FineId id) {
    if (id < 1 || id > kNumFineParts)
        throw std::out_of_range("fine label id out of range");
}

}  // namespace

const std::array<FinePartInfo, kNumFineParts>& fine_parts() { return kFineParts; }

const std::array<AggregatePartInfo, kNumAggregateParts>& aggregate_parts() {
    return kAggregateParts;
}

AggregateId aggregate_of(FineId id) {
    if (id == kBackground) return kBackground;
    check_fine(id);
    return kFineParts[id - 1].aggregate;
}

Side side_of(FineId id) {
    check_fine(id);
    return kFineParts[id - 1].side;
}

FineId mirror_fine(FineId id) {
    if (id == kBackground) return kBackground;
    check_fine(id);
    return kMirror[id];
}

std::string_view fine_name(FineId id) {
    check_fine(id);
    return kFineParts[id - 1].name;
}

std::string_view aggregate_name(AggregateId id) {
    if (id < 1 || id > kNumAggregateParts)
        throw std::out_of_range("aggregate label id out of range");
    return kAggregateParts[id - 1].name;
}

std::optional<FineId> fine_from_name(std::string_view name) {
    for (const auto& p : kFineParts)
        if (p.name == name) return p.id;
    return std::nullopt;
}

std::optional<AggregateId> aggregate_from_name(std::string_view name) {
    for (const auto& p : kAggregateParts)
        if (p.name == name) return p.id;
    return std::nullopt;
}

const std::array<AggregateId, 2>& component_members(ComponentId c) {
    return kComponentMembers[static_cast<int>(c)];
}

bool component_contains(ComponentId c, AggregateId a) {
    const auto& m = component_members(c);
    return m[0] == a || m[1] == a;
}

std::string_view to_string(CarType t) { return kCarNames[static_cast<int>(t)]; }

std::optional<CarType> car_type_from_string(std::string_view s) {
    for (int i = 0; i < kNumCarTypes; ++i)
        if (kCarNames[i] == s) return static_cast<CarType>(i);
    return std::nullopt;
}

std::string_view to_string(Orientation o) {
    return o == Orientation::left ? "left" : "right";
}

std::optional<Orientation> orientation_from_string(std::string_view s) {
    if (s == "left") return Orientation::left;
    if (s == "right") return Orientation::right;
    return std::nullopt;
}

std::string_view to_string(Granularity g) {
    return g == Granularity::part ? "part" : "piece";
}

std::optional<Granularity> granularity_from_string(std::string_view s) {
    if (s == "part") return Granularity::part;
    if (s == "piece") return Granularity::piece;
    return std::nullopt;
}

std::string_view to_string(ComponentId c) {
    return kComponentNames[static_cast<int>(c)];
}

std::optional<ComponentId> component_from_string(std::string_view s) {
    for (int i = 0; i < kNumComponents; ++i)
        if (kComponentNames[i] == s) return static_cast<ComponentId>(i);
    return std::nullopt;
}

}  // namespace partva
