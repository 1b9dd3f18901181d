#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace partva {

// ---------------------------------------------------------------------------
// Car types
// ---------------------------------------------------------------------------

enum class CarType : std::uint8_t { sedan = 0, suv, wagon, truck, minivan };

inline constexpr int kNumCarTypes = 5;

constexpr std::array<CarType, kNumCarTypes> all_car_types() {
    return {CarType::sedan, CarType::suv, CarType::wagon, CarType::truck,
            CarType::minivan};
}

std::string_view to_string(CarType t);
std::optional<CarType> car_type_from_string(std::string_view s);

// ---------------------------------------------------------------------------
// Orientation (side-view facing direction)
// ---------------------------------------------------------------------------

enum class Orientation : std::uint8_t { left = 0, right };

constexpr Orientation mirrored(Orientation o) {
    return o == Orientation::left ? Orientation::right : Orientation::left;
}

std::string_view to_string(Orientation o);
std::optional<Orientation> orientation_from_string(std::string_view s);

// ---------------------------------------------------------------------------
// Granularity of a subregion crop
// ---------------------------------------------------------------------------

enum class Granularity : std::uint8_t { part = 0, piece };

constexpr Granularity swapped(Granularity g) {
    return g == Granularity::part ? Granularity::piece : Granularity::part;
}

std::string_view to_string(Granularity g);
std::optional<Granularity> granularity_from_string(std::string_view s);

// ---------------------------------------------------------------------------
// Part labels. Fine labels are what renders and map files carry (ids 1..31,
// 0 = background); aggregate labels (ids 1..13) are what features and mIoU
// are computed over.
// ---------------------------------------------------------------------------

using FineId = std::uint8_t;       // 0 = background, 1..31 = fine parts
using AggregateId = std::uint8_t;  // 0 = background, 1..13 = aggregate parts

inline constexpr FineId kBackground = 0;
inline constexpr int kNumFineParts = 31;
inline constexpr int kNumAggregateParts = 13;

enum class Side : std::uint8_t { left, right, center };

// Aggregate ids, fixed.
namespace agg {
inline constexpr AggregateId door = 1;
inline constexpr AggregateId window = 2;
inline constexpr AggregateId windshield = 3;
inline constexpr AggregateId hood = 4;
inline constexpr AggregateId trunk = 5;
inline constexpr AggregateId roof = 6;
inline constexpr AggregateId mirror = 7;
inline constexpr AggregateId bumper = 8;
inline constexpr AggregateId wheel = 9;
inline constexpr AggregateId headlight = 10;
inline constexpr AggregateId taillight = 11;
inline constexpr AggregateId plate = 12;
inline constexpr AggregateId body = 13;
}  // namespace agg

// Fine ids, fixed. Left/right pairs differ in the low bit where applicable;
// the authoritative pairing is mirror_fine().
namespace fine {
inline constexpr FineId front_left_door = 1;
inline constexpr FineId front_right_door = 2;
inline constexpr FineId back_left_door = 3;
inline constexpr FineId back_right_door = 4;
inline constexpr FineId front_left_window = 5;
inline constexpr FineId front_right_window = 6;
inline constexpr FineId back_left_window = 7;
inline constexpr FineId back_right_window = 8;
inline constexpr FineId windshield = 9;
inline constexpr FineId rear_window = 10;
inline constexpr FineId hood = 11;
inline constexpr FineId trunk = 12;
inline constexpr FineId roof = 13;
inline constexpr FineId left_mirror = 14;
inline constexpr FineId right_mirror = 15;
inline constexpr FineId front_bumper = 16;
inline constexpr FineId back_bumper = 17;
inline constexpr FineId front_left_wheel = 18;
inline constexpr FineId front_right_wheel = 19;
inline constexpr FineId back_left_wheel = 20;
inline constexpr FineId back_right_wheel = 21;
inline constexpr FineId left_headlight = 22;
inline constexpr FineId right_headlight = 23;
inline constexpr FineId left_taillight = 24;
inline constexpr FineId right_taillight = 25;
inline constexpr FineId front_plate = 26;
inline constexpr FineId back_plate = 27;
inline constexpr FineId grille = 28;
inline constexpr FineId left_body_panel = 29;
inline constexpr FineId right_body_panel = 30;
inline constexpr FineId chassis = 31;
}  // namespace fine

struct FinePartInfo {
    FineId id;
    std::string_view name;
    Side side;
    AggregateId aggregate;
};

struct AggregatePartInfo {
    AggregateId id;
    std::string_view name;
};

const std::array<FinePartInfo, kNumFineParts>& fine_parts();
const std::array<AggregatePartInfo, kNumAggregateParts>& aggregate_parts();

AggregateId aggregate_of(FineId id);  // background maps to background
Side side_of(FineId id);
// The left<->right involution; center labels map to themselves.
FineId mirror_fine(FineId id);

std::string_view fine_name(FineId id);
std::string_view aggregate_name(AggregateId id);
std::optional<FineId> fine_from_name(std::string_view name);
std::optional<AggregateId> aggregate_from_name(std::string_view name);

// ---------------------------------------------------------------------------
// Experimental components: the four probed car subregions. Members are
// aggregate labels and the four member sets are pairwise disjoint.
// ---------------------------------------------------------------------------

enum class ComponentId : std::uint8_t {
    door_window = 0,
    hood_windshield,
    trunk_bumper,
    headlight_wheel
};

inline constexpr int kNumComponents = 4;

constexpr std::array<ComponentId, kNumComponents> all_components() {
    return {ComponentId::door_window, ComponentId::hood_windshield,
            ComponentId::trunk_bumper, ComponentId::headlight_wheel};
}

const std::array<AggregateId, 2>& component_members(ComponentId c);
bool component_contains(ComponentId c, AggregateId a);

std::string_view to_string(ComponentId c);
std::optional<ComponentId> component_from_string(std::string_view s);

}  // namespace partva
