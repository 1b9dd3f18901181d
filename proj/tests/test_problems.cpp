#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include "partva/problem.hpp"
#include "partva/problem_io.hpp"
#include "partva/scene.hpp"

using namespace partva;

namespace {

LabelMap crop_of(CarType car, Orientation facing, ComponentId comp,
                 Granularity g) {
    return extract_subregion(render_whole_car({car, facing, std::nullopt}),
                             {comp, g});
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), {}};
}

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_SUITE("problems") {

TEST_CASE("test set structure: 128 problems, balanced cells and pairs") {
    const ProblemSet set = build_test_set(7);
    REQUIRE(set.problems.size() == kTestSetSize);
    CHECK(set.kind == SetKind::test128);

    std::map<int, int> per_cell;
    std::map<std::tuple<CarType, CarType, ComponentId>, int> per_pair_comp;
    std::set<std::string> ids;
    for (const AnalogyProblem& p : set.problems) {
        ++per_cell[p.condition.cell_index()];
        ++per_pair_comp[{p.source_car, p.target_car, p.component}];
        CHECK(ids.insert(p.problem_id).second);
        CHECK(p.problem_id.starts_with("t128_"));
        CHECK(p.source_car != p.target_car);
    }
    REQUIRE(per_cell.size() == kNumConditionCells);
    for (const auto& [cell, n] : per_cell) CHECK(n == 16);
    REQUIRE(per_pair_comp.size() == 16);  // 4 ordered pairs x 4 components
    for (const auto& [key, n] : per_pair_comp) CHECK(n == 8);
}

TEST_CASE("test set content is the documented construction") {
    const ProblemSet set = build_test_set(3);
    for (const AnalogyProblem& p : set.problems) {
        const Condition cond = p.condition;
        const Orientation source_facing = Orientation::left;
        const Orientation target_facing =
            cond.orientation_same ? Orientation::left : Orientation::right;

        const std::optional<ComponentId> occ =
            cond.visible ? std::nullopt : std::optional(p.component);
        CHECK(p.a == render_whole_car({p.source_car, source_facing, occ}));
        CHECK(p.c == render_whole_car({p.target_car, target_facing, occ}));
        CHECK(p.b == crop_of(p.source_car, source_facing, p.component,
                             cond.granularity));

        // The four options are the four-way scheme, in some order.
        std::array<bool, 4> seen{};
        for (int i = 0; i < 4; ++i) {
            const OptionKind kind = p.option_kinds[i];
            seen[static_cast<int>(kind)] = true;
            const Granularity other = swapped(cond.granularity);
            LabelMap expected;
            CarType expected_car;
            switch (kind) {
                case OptionKind::correct:
                    expected = crop_of(p.target_car, target_facing,
                                       p.component, cond.granularity);
                    expected_car = p.target_car;
                    break;
                case OptionKind::wrong_subregion:
                    expected = crop_of(p.target_car, target_facing,
                                       p.component, other);
                    expected_car = p.target_car;
                    break;
                case OptionKind::wrong_car:
                    expected = crop_of(p.source_car, source_facing,
                                       p.component, cond.granularity);
                    expected_car = p.source_car;
                    break;
                case OptionKind::both_wrong:
                    expected = crop_of(p.source_car, source_facing,
                                       p.component, other);
                    expected_car = p.source_car;
                    break;
                default: FAIL("unexpected option kind in test set");
            }
            CHECK(p.options[i] == expected);
            CHECK(p.option_cars[i] == expected_car);
        }
        CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
        CHECK(p.option_kinds[p.correct_index] == OptionKind::correct);
        // The wrong-car distractor shows the same picture as B.
        for (int i = 0; i < 4; ++i)
            if (p.option_kinds[i] == OptionKind::wrong_car)
                CHECK(p.options[i] == p.b);
    }
}

TEST_CASE("the seed only permutes options within problems") {
    const ProblemSet s1 = build_test_set(1);
    const ProblemSet s2 = build_test_set(2);
    REQUIRE(s1.problems.size() == s2.problems.size());
    bool any_order_differs = false;
    for (std::size_t i = 0; i < s1.problems.size(); ++i) {
        const AnalogyProblem& p = s1.problems[i];
        const AnalogyProblem& q = s2.problems[i];
        CHECK(p.problem_id == q.problem_id);
        CHECK(p.a == q.a);
        CHECK(p.b == q.b);
        CHECK(p.c == q.c);
        // Same multiset of (kind, map); possibly different arrangement.
        std::multiset<std::string> pm, qm;
        for (int k = 0; k < 4; ++k) {
            pm.insert(std::string(to_string(p.option_kinds[k])) +
                      to_valm(p.options[k]));
            qm.insert(std::string(to_string(q.option_kinds[k])) +
                      to_valm(q.options[k]));
        }
        CHECK(pm == qm);
        if (p.correct_index != q.correct_index) any_order_differs = true;
    }
    CHECK(any_order_differs);
    CHECK(build_test_set(1).problems[40].correct_index ==
          s1.problems[40].correct_index);
}

TEST_CASE("frozen golden: content hash of the seed-7 test set") {
    CHECK("fnv1a64:" + to_hex(content_hash(build_test_set(7))) ==
          "fnv1a64:b976d20dc37eda2f");
}

TEST_CASE("corpus problems are deterministic and well-formed") {
    for (std::uint64_t i : {0ull, 1ull, 17ull}) {
        const AnalogyProblem p = corpus_problem(5, i);
        CHECK(p.problem_id == corpus_problem(5, i).problem_id);
        CHECK(p.a == corpus_problem(5, i).a);
        CHECK(p.source_car != p.target_car);
        CHECK(p.condition.visible);

        int corrects = 0, fillers = 0;
        for (int k = 0; k < 4; ++k) {
            if (p.option_kinds[k] == OptionKind::correct) ++corrects;
            if (p.option_kinds[k] == OptionKind::corpus_random) ++fillers;
        }
        CHECK(corrects == 1);
        CHECK(fillers == 3);
        CHECK(p.option_kinds[p.correct_index] == OptionKind::correct);
        CHECK(p.options[p.correct_index] ==
              extract_subregion(p.c, {p.component, p.condition.granularity}));
        CHECK(p.condition.orientation_same ==
              (infer_facing(p.a) == infer_facing(p.c)));
        CHECK(p.b == extract_subregion(p.a, {p.component,
                                             p.condition.granularity}));
    }
    const ProblemSet c = build_corpus(8, 5);
    CHECK(c.kind == SetKind::corpus);
    for (std::size_t i = 0; i < c.problems.size(); ++i)
        CHECK(c.problems[i].problem_id == corpus_problem(5, i).problem_id);
}

TEST_CASE("problem set directory round-trip") {
    const ProblemSet set = build_corpus(6, 11);
    const auto dir = fresh_dir("partva_rt_set");
    const Manifest man = save_problem_set(set, dir);
    CHECK(man.count == 6);
    CHECK(man.kind == SetKind::corpus);
    CHECK(man.seed == 11);
    CHECK(man.content_hash == "fnv1a64:" + to_hex(content_hash(set)));

    SetHasher hasher;
    for (const AnalogyProblem& p : set.problems) hasher.add(p);
    CHECK(man.content_hash == "fnv1a64:" + to_hex(hasher.value()));

    const ProblemSet back = load_problem_set(dir);
    REQUIRE(back.problems.size() == set.problems.size());
    for (std::size_t i = 0; i < set.problems.size(); ++i) {
        const AnalogyProblem& p = set.problems[i];
        const AnalogyProblem& q = back.problems[i];
        CHECK(p.problem_id == q.problem_id);
        CHECK(p.condition == q.condition);
        CHECK(p.source_car == q.source_car);
        CHECK(p.target_car == q.target_car);
        CHECK(p.component == q.component);
        CHECK(p.a == q.a);
        CHECK(p.b == q.b);
        CHECK(p.c == q.c);
        CHECK(p.options == q.options);
        CHECK(p.option_kinds == q.option_kinds);
        CHECK(p.option_cars == q.option_cars);
        CHECK(p.correct_index == q.correct_index);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("saving the same set twice is byte-identical") {
    const ProblemSet set = build_test_set(7);
    const auto d1 = fresh_dir("partva_bytes_1");
    const auto d2 = fresh_dir("partva_bytes_2");
    save_problem_set(set, d1);
    save_problem_set(build_test_set(7), d2);
    CHECK(slurp(d1 / "manifest.json") == slurp(d2 / "manifest.json"));
    CHECK(slurp(d1 / "problems.jsonl") == slurp(d2 / "problems.jsonl"));

    std::set<std::string> n1, n2;
    for (const auto& e : std::filesystem::directory_iterator(d1 / "maps"))
        n1.insert(e.path().filename().string());
    for (const auto& e : std::filesystem::directory_iterator(d2 / "maps"))
        n2.insert(e.path().filename().string());
    REQUIRE(n1 == n2);
    CHECK(!n1.empty());
    for (const std::string& name : n1)
        CHECK(slurp(d1 / "maps" / name) == slurp(d2 / "maps" / name));
    std::filesystem::remove_all(d1);
    std::filesystem::remove_all(d2);
}

TEST_CASE("loading rejects a tampered directory") {
    const ProblemSet set = build_corpus(3, 2);
    const auto dir = fresh_dir("partva_tamper");
    save_problem_set(set, dir);
    // Flip one label inside one stored map.
    const auto maps = dir / "maps";
    const auto first = std::filesystem::directory_iterator(maps)->path();
    std::string text = slurp(first);
    const auto pos = text.find_last_of("0123456789");
    text[pos] = text[pos] == '0' ? '1' : '0';
    std::ofstream(first, std::ios::binary) << text;
    CHECK_THROWS(load_problem_set(dir));
    std::filesystem::remove_all(dir);
}

}  // problems
