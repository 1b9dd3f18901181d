#include "partva/problem.hpp"

#include <algorithm>
#include <stdexcept>

#include "partva/rng.hpp"

namespace partva {

namespace {

constexpr std::array<std::string_view, 5> kOptionKindNames = {
    "correct", "wrong_subregion", "wrong_car", "both_wrong", "corpus_random"};

LabelMap whole(CarType type, Orientation facing) {
    return render_whole_car({type, facing, std::nullopt});
}

LabelMap whole_occluded(CarType type, Orientation facing, ComponentId comp) {
    return render_whole_car({type, facing, comp});
}

LabelMap crop_of(CarType type, Orientation facing, ComponentId comp,
                 Granularity g) {
    return extract_subregion(whole(type, facing), {comp, g});
}

// Fisher-Yates with the shared stream; maps slot -> position.
std::array<int, 4> shuffled_positions(rng::SplitMix64& stream) {
    std::array<int, 4> order = {0, 1, 2, 3};
    for (int i = 3; i > 0; --i)
        std::swap(order[i], order[static_cast<int>(stream.below(i + 1))]);
    return order;
}

void place_options(AnalogyProblem& p,
                   std::array<std::pair<LabelMap, OptionKind>, 4>&& slots,
                   const std::array<CarType, 4>& slot_cars,
                   rng::SplitMix64& stream) {
    const std::array<int, 4> pos = shuffled_positions(stream);
    for (int s = 0; s < 4; ++s) {
        p.options[pos[s]] = std::move(slots[s].first);
        p.option_kinds[pos[s]] = slots[s].second;
        p.option_cars[pos[s]] = slot_cars[s];
        if (slots[s].second == OptionKind::correct) p.correct_index = pos[s];
    }
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (p.options[i] == p.options[j])
                throw std::logic_error("options not pairwise distinct: " +
                                       p.problem_id);
}

}  // namespace

std::string Condition::key() const {
    std::string k = orientation_same ? "same" : "diff";
    k += visible ? "-vis" : "-invis";
    k += granularity == Granularity::part ? "-part" : "-piece";
    return k;
}

Condition condition_from_cell(int cell_index) {
    if (cell_index < 0 || cell_index >= kNumConditionCells)
        throw std::out_of_range("condition cell index out of range");
    Condition c;
    c.orientation_same = (cell_index & 4) == 0;
    c.visible = (cell_index & 2) == 0;
    c.granularity = (cell_index & 1) == 0 ? Granularity::part : Granularity::piece;
    return c;
}

Condition condition_from_key(std::string_view key) {
    for (int i = 0; i < kNumConditionCells; ++i) {
        const Condition c = condition_from_cell(i);
        if (c.key() == key) return c;
    }
    throw std::runtime_error("unknown condition key: " + std::string(key));
}

std::string_view to_string(OptionKind k) {
    return kOptionKindNames[static_cast<int>(k)];
}

OptionKind option_kind_from_string(std::string_view s) {
    for (int i = 0; i < 5; ++i)
        if (kOptionKindNames[i] == s) return static_cast<OptionKind>(i);
    throw std::runtime_error("unknown option kind: " + std::string(s));
}

std::string_view to_string(SetKind k) {
    return k == SetKind::test128 ? "test128" : "corpus";
}

SetKind set_kind_from_string(std::string_view s) {
    if (s == "test128") return SetKind::test128;
    if (s == "corpus") return SetKind::corpus;
    throw std::runtime_error("unknown problem set kind: " + std::string(s));
}

const std::array<std::pair<CarType, CarType>, 4>& test_car_pairs() {
    static const std::array<std::pair<CarType, CarType>, 4> pairs = {{
        {CarType::sedan, CarType::suv},
        {CarType::suv, CarType::wagon},
        {CarType::wagon, CarType::truck},
        {CarType::truck, CarType::sedan},
    }};
    return pairs;
}

std::array<std::pair<LabelMap, OptionKind>, 4> make_distractors(
    CarType source_car, CarType target_car, ComponentId component,
    Granularity granularity, Orientation source_facing,
    Orientation target_facing) {
    if (source_car == target_car)
        throw std::invalid_argument("source and target car must differ");
    const Granularity other = swapped(granularity);
    return {{
        {crop_of(target_car, target_facing, component, granularity),
         OptionKind::correct},
        {crop_of(target_car, target_facing, component, other),
         OptionKind::wrong_subregion},
        {crop_of(source_car, source_facing, component, granularity),
         OptionKind::wrong_car},
        {crop_of(source_car, source_facing, component, other),
         OptionKind::both_wrong},
    }};
}

ProblemSet build_test_set(std::uint64_t seed) {
    ProblemSet set;
    set.kind = SetKind::test128;
    set.seed = seed;
    set.problems.reserve(kTestSetSize);

    int index = 0;
    for (int cell = 0; cell < kNumConditionCells; ++cell) {
        const Condition cond = condition_from_cell(cell);
        for (const auto& [source_car, target_car] : test_car_pairs()) {
            for (ComponentId comp : all_components()) {
                const Orientation source_facing = Orientation::left;
                const Orientation target_facing = cond.orientation_same
                                                      ? Orientation::left
                                                      : Orientation::right;
                AnalogyProblem p;
                p.condition = cond;
                p.source_car = source_car;
                p.target_car = target_car;
                p.component = comp;
                p.problem_id = "t128_" +
                               std::string(index < 10 ? "00" : index < 100 ? "0" : "") +
                               std::to_string(index) + "_" + cond.key() + "_" +
                               std::string(to_string(source_car)) + "-" +
                               std::string(to_string(target_car)) + "_" +
                               std::string(to_string(comp));

                if (cond.visible) {
                    p.a = whole(source_car, source_facing);
                    p.c = whole(target_car, target_facing);
                } else {
                    p.a = whole_occluded(source_car, source_facing, comp);
                    p.c = whole_occluded(target_car, target_facing, comp);
                }
                p.b = crop_of(source_car, source_facing, comp, cond.granularity);

                auto slots = make_distractors(source_car, target_car, comp,
                                              cond.granularity, source_facing,
                                              target_facing);
                const std::array<CarType, 4> slot_cars = {
                    target_car, target_car, source_car, source_car};
                rng::SplitMix64 stream(rng::split(seed, index));
                place_options(p, std::move(slots), slot_cars, stream);

                set.problems.push_back(std::move(p));
                ++index;
            }
        }
    }
    return set;
}

AnalogyProblem corpus_problem(std::uint64_t seed, std::uint64_t index) {
    rng::SplitMix64 stream(rng::split(seed, index));

    const auto cars = all_car_types();
    const CarType source_car = cars[stream.below(kNumCarTypes)];
    CarType target_car = cars[stream.below(kNumCarTypes - 1)];
    if (target_car >= source_car)
        target_car = static_cast<CarType>(static_cast<int>(target_car) + 1);

    const ComponentId comp =
        all_components()[stream.below(kNumComponents)];
    const Granularity gran =
        stream.below(2) == 0 ? Granularity::part : Granularity::piece;
    const Orientation a_facing =
        stream.below(2) == 0 ? Orientation::left : Orientation::right;
    const Orientation c_facing =
        stream.below(2) == 0 ? Orientation::left : Orientation::right;

    AnalogyProblem p;
    p.condition = {a_facing == c_facing, true, gran};
    p.source_car = source_car;
    p.target_car = target_car;
    p.component = comp;
    p.problem_id = "corpus_" + std::to_string(index) + "_" +
                   std::string(to_string(source_car)) + "-" +
                   std::string(to_string(target_car)) + "_" +
                   std::string(to_string(comp)) + "_" +
                   std::string(to_string(gran));
    p.a = whole(source_car, a_facing);
    p.c = whole(target_car, c_facing);
    p.b = extract_subregion(p.a, {comp, gran});

    // Candidate pool of 7 foils: one other subregion of the target car, two
    // subregions of the source car, four subregions of the three remaining
    // car types. Three are drawn without replacement.
    struct Candidate {
        CarType car;
        Orientation facing;
        ComponentId comp;
        Granularity gran;
    };
    std::array<Candidate, 7> pool;

    const int correct_combo = static_cast<int>(comp) * 2 +
                              (gran == Granularity::piece ? 1 : 0);
    int combo = static_cast<int>(stream.below(7));
    if (combo >= correct_combo) ++combo;
    pool[0] = {target_car, c_facing, static_cast<ComponentId>(combo / 2),
               combo % 2 ? Granularity::piece : Granularity::part};

    const int a1 = static_cast<int>(stream.below(8));
    int a2 = static_cast<int>(stream.below(7));
    if (a2 >= a1) ++a2;
    pool[1] = {source_car, a_facing, static_cast<ComponentId>(a1 / 2),
               a1 % 2 ? Granularity::piece : Granularity::part};
    pool[2] = {source_car, a_facing, static_cast<ComponentId>(a2 / 2),
               a2 % 2 ? Granularity::piece : Granularity::part};

    std::array<CarType, 3> others;
    int no = 0;
    for (CarType t : cars)
        if (t != source_car && t != target_car) others[no++] = t;
    std::array<int, 24> other_combos;  // (other car, component, granularity)
    for (int i = 0; i < 24; ++i) other_combos[i] = i;
    for (int i = 0; i < 4; ++i) {
        const int j = i + static_cast<int>(stream.below(24 - i));
        std::swap(other_combos[i], other_combos[j]);
        const int pick = other_combos[i];
        pool[3 + i] = {others[pick / 8],
                       stream.below(2) == 0 ? Orientation::left
                                            : Orientation::right,
                       static_cast<ComponentId>((pick % 8) / 2),
                       pick % 2 ? Granularity::piece : Granularity::part};
    }

    std::array<int, 7> pool_order = {0, 1, 2, 3, 4, 5, 6};
    for (int i = 0; i < 3; ++i) {
        const int j = i + static_cast<int>(stream.below(7 - i));
        std::swap(pool_order[i], pool_order[j]);
    }

    std::array<std::pair<LabelMap, OptionKind>, 4> slots;
    std::array<CarType, 4> slot_cars;
    slots[0] = {extract_subregion(p.c, {comp, gran}), OptionKind::correct};
    slot_cars[0] = target_car;
    for (int i = 0; i < 3; ++i) {
        const Candidate& f = pool[pool_order[i]];
        slots[1 + i] = {crop_of(f.car, f.facing, f.comp, f.gran),
                        OptionKind::corpus_random};
        slot_cars[1 + i] = f.car;
    }
    place_options(p, std::move(slots), slot_cars, stream);
    return p;
}

ProblemSet build_corpus(std::uint64_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("corpus size must be >= 1");
    ProblemSet set;
    set.kind = SetKind::corpus;
    set.seed = seed;
    set.problems.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i)
        set.problems.push_back(corpus_problem(seed, i));
    return set;
}

}  // namespace partva
