#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "partva/label_map.hpp"
#include "partva/scene.hpp"
#include "partva/taxonomy.hpp"

namespace partva {

// One of the 2x2x2 experimental cells.
struct Condition {
    bool orientation_same = true;
    bool visible = true;
    Granularity granularity = Granularity::part;

    // Canonical cell index: (orientation_same, visible, granularity) in
    // lexicographic order with same < diff, visible < invisible,
    // part < piece. Fixed so 8-cell vectors are unambiguous.
    int cell_index() const {
        return ((orientation_same ? 0 : 1) << 2) | ((visible ? 0 : 1) << 1) |
               (granularity == Granularity::part ? 0 : 1);
    }
    std::string key() const;

    bool operator==(const Condition&) const = default;
};

inline constexpr int kNumConditionCells = 8;

Condition condition_from_cell(int cell_index);
Condition condition_from_key(std::string_view key);

enum class OptionKind : std::uint8_t {
    correct = 0,
    wrong_subregion,
    wrong_car,
    both_wrong,
    corpus_random
};

std::string_view to_string(OptionKind k);
OptionKind option_kind_from_string(std::string_view s);

struct AnalogyProblem {
    std::string problem_id;
    Condition condition;
    CarType source_car = CarType::sedan;
    CarType target_car = CarType::suv;
    ComponentId component = ComponentId::door_window;
    LabelMap a, b, c;
    std::array<LabelMap, 4> options;
    std::array<OptionKind, 4> option_kinds{};
    std::array<CarType, 4> option_cars{};
    int correct_index = 0;
};

enum class SetKind : std::uint8_t { test128, corpus };

std::string_view to_string(SetKind k);
SetKind set_kind_from_string(std::string_view s);

struct ProblemSet {
    SetKind kind = SetKind::test128;
    std::uint64_t seed = 0;
    std::vector<AnalogyProblem> problems;
};

// The four ordered car pairs of the experiment.
const std::array<std::pair<CarType, CarType>, 4>& test_car_pairs();

// The four option maps in canonical kind order: correct, wrong_subregion,
// wrong_car, both_wrong. Subregion crops inherit their parent car's
// orientation.
std::array<std::pair<LabelMap, OptionKind>, 4> make_distractors(
    CarType source_car, CarType target_car, ComponentId component,
    Granularity granularity, Orientation source_facing,
    Orientation target_facing);

// The fixed 128-problem test set: 8 condition cells x 4 car pairs x
// 4 components. Problem content is determined entirely by the cell; the
// seed only permutes the four options within each problem.
ProblemSet build_test_set(std::uint64_t seed);

inline constexpr int kTestSetSize = 128;

// Streaming corpus access: problem `index` of the corpus seeded with `seed`.
AnalogyProblem corpus_problem(std::uint64_t seed, std::uint64_t index);

// Materialized corpus (prefer corpus_problem for very large n).
ProblemSet build_corpus(std::uint64_t n, std::uint64_t seed);

}  // namespace partva
