#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "partva/evaluate.hpp"
#include "partva/problem.hpp"

using namespace partva;

namespace {

std::filesystem::path write_csv(const std::string& name,
                                const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << body;
    return path;
}

const char* kCanonicalCsv =
    "# note: cells are approximate\n"
    "condition,accuracy\n"
    "same-vis-part,0.75\n"
    "same-vis-piece,0.66\n"
    "same-invis-part,0.70\n"
    "same-invis-piece,0.60\n"
    "diff-vis-part,0.62\n"
    "diff-vis-piece,0.52\n"
    "diff-invis-part,0.55\n"
    "diff-invis-piece,0.48\n"
    "overall,0.61\n";

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("condition keys and cell indices are a fixed bijection") {
    const std::array<std::string, 8> expected = {
        "same-vis-part",  "same-vis-piece",  "same-invis-part",
        "same-invis-piece", "diff-vis-part",  "diff-vis-piece",
        "diff-invis-part", "diff-invis-piece"};
    for (int cell = 0; cell < kNumConditionCells; ++cell) {
        const Condition c = condition_from_cell(cell);
        CHECK(c.cell_index() == cell);
        CHECK(c.key() == expected[cell]);
        CHECK(condition_from_key(expected[cell]) == c);
    }
    CHECK_THROWS(condition_from_key("same-vis-chunk"));
}

TEST_CASE("rmsd hand examples") {
    const std::vector<double> model = {1, 1, 1, 1, 0, 0, 0, 0};
    const std::vector<double> human = {.8, .8, .8, .8, .4, .4, .4, .4};
    CHECK(rmsd(model, human) ==
          doctest::Approx(std::sqrt(0.1)).epsilon(1e-12));
    CHECK(rmsd(model, model) == doctest::Approx(0.0));
    CHECK(rmsd(human, model) == rmsd(model, human));

    std::vector<double> offset(8, 0.5), base(8, 0.37);
    CHECK(rmsd(offset, base) == doctest::Approx(0.13));
    CHECK_THROWS(rmsd(std::vector<double>(7, 0.0), model));
}

TEST_CASE("main effects are marginal mean differences") {
    std::array<double, kNumConditionCells> acc{};
    acc.fill(0.8);
    MainEffects uniform = main_effects(acc);
    CHECK(uniform.orientation == doctest::Approx(0.0));
    CHECK(uniform.visibility == doctest::Approx(0.0));
    CHECK(uniform.granularity == doctest::Approx(0.0));

    // First four cells are the same-orientation side.
    acc = {1, 1, 1, 1, 0, 0, 0, 0};
    const MainEffects orient = main_effects(acc);
    CHECK(orient.orientation == doctest::Approx(1.0));
    CHECK(orient.visibility == doctest::Approx(0.0));
    CHECK(orient.granularity == doctest::Approx(0.0));

    acc = {.75, .66, .70, .60, .62, .52, .55, .48};
    const MainEffects human = main_effects(acc);
    CHECK(human.orientation == doctest::Approx(0.135));
    CHECK(human.visibility == doctest::Approx(0.055));
    CHECK(human.granularity == doctest::Approx(0.09));
}

TEST_CASE("weighted main effects skip empty cells") {
    std::array<double, kNumConditionCells> acc = {1, 1, 1, 1, 0, 0, 0, 0};
    std::array<std::uint64_t, kNumConditionCells> totals = {4, 4, 4, 4,
                                                            4, 4, 4, 0};
    const MainEffects e = main_effects(acc, totals);
    CHECK(e.orientation == doctest::Approx(1.0));

    totals = {4, 4, 4, 4, 0, 0, 0, 0};
    const MainEffects nan_side = main_effects(acc, totals);
    CHECK(std::isnan(nan_side.orientation));
}

TEST_CASE("human reference loads the canonical file") {
    const auto path = write_csv("partva_human_ok.csv", kCanonicalCsv);
    const HumanReference h = load_human_reference(path);
    CHECK(h.overall == doctest::Approx(0.61));
    CHECK(h.cell_accuracy[0] == doctest::Approx(0.75));
    CHECK(h.cell_accuracy[7] == doctest::Approx(0.48));
    CHECK(h.source_note.find("approximate") != std::string::npos);
    std::filesystem::remove(path);

    const HumanReference shipped = load_human_reference(
        std::filesystem::path(PARTVA_SOURCE_DIR) / "data" /
        "human_reference.csv");
    CHECK(shipped.overall == doctest::Approx(0.61));
    const MainEffects e = main_effects(shipped.cell_accuracy);
    CHECK(e.orientation > 0);
    CHECK(e.visibility > 0);
    CHECK(e.granularity > 0);
    CHECK(e.orientation > e.granularity);
    CHECK(e.granularity > e.visibility);
}

TEST_CASE("human reference rejects malformed files") {
    const std::string header = "condition,accuracy\n";
    SUBCASE("missing cell") {
        const auto p = write_csv(
            "partva_human_missing.csv",
            header + "same-vis-part,0.5\noverall,0.5\n");
        CHECK_THROWS(load_human_reference(p));
        std::filesystem::remove(p);
    }
    SUBCASE("duplicate cell") {
        std::string body = kCanonicalCsv;
        body += "same-vis-part,0.75\n";
        const auto p = write_csv("partva_human_dup.csv", body);
        CHECK_THROWS(load_human_reference(p));
        std::filesystem::remove(p);
    }
    SUBCASE("out-of-range value") {
        std::string body = kCanonicalCsv;
        const auto pos = body.find("0.48");
        body.replace(pos, 4, "1.30");
        const auto p = write_csv("partva_human_range.csv", body);
        CHECK_THROWS(load_human_reference(p));
        std::filesystem::remove(p);
    }
    SUBCASE("missing overall") {
        std::string body(kCanonicalCsv);
        body = body.substr(0, body.find("overall"));
        const auto p = write_csv("partva_human_nooverall.csv", body);
        CHECK_THROWS(load_human_reference(p));
        std::filesystem::remove(p);
    }
    SUBCASE("unknown condition key") {
        std::string body = kCanonicalCsv;
        const auto pos = body.find("diff-invis-piece");
        body.replace(pos, 16, "diff-invis-chunk");
        const auto p = write_csv("partva_human_badkey.csv", body);
        CHECK_THROWS(load_human_reference(p));
        std::filesystem::remove(p);
    }
}

TEST_CASE("oracle run: pcm with ground truth aces the test set") {
    ProblemSource src = ProblemSource::from_set(build_test_set(7));
    const EvaluationReport rep = evaluate(src, {});
    CHECK(rep.overall == doctest::Approx(1.0));
    CHECK(rep.solver_id == "pcm");
    CHECK(rep.set_hash == "fnv1a64:b976d20dc37eda2f");
    std::uint64_t total = 0, correct = 0;
    for (const CellStats& c : rep.cells) {
        CHECK(c.total == 16);
        CHECK(c.accuracy() == doctest::Approx(1.0));
        std::uint64_t responses = 0;
        for (std::uint64_t r : c.responses) responses += r;
        CHECK(responses == c.total);
        total += c.total;
        correct += c.correct;
    }
    CHECK(total == kTestSetSize);
    CHECK(rep.overall == doctest::Approx(double(correct) / double(total)));
    CHECK(rep.effects.orientation == doctest::Approx(0.0));
    CHECK(rep.effects.visibility == doctest::Approx(0.0));
    CHECK(rep.effects.granularity == doctest::Approx(0.0));
}

TEST_CASE("evaluation is deterministic, sources interchangeable") {
    const NoiseProfile prof = [] {
        NoiseProfile p;
        p.flip_rate_base = 0.4;
        p.seed = 5;
        return p;
    }();
    EvaluateOptions opt;
    opt.noise = prof;

    ProblemSource a = ProblemSource::from_corpus(40, 9);
    ProblemSource b = ProblemSource::from_set(build_corpus(40, 9));
    const EvaluationReport ra = evaluate(a, opt);
    const EvaluationReport rb = evaluate(b, opt);
    CHECK(to_json(ra).dump() == to_json(rb).dump());
    CHECK(ra.set_hash == rb.set_hash);

    ProblemSource c = ProblemSource::from_corpus(40, 9);
    const EvaluationReport rc = evaluate(c, opt);
    CHECK(to_json(ra).dump() == to_json(rc).dump());
}

TEST_CASE("report json carries profile, cells, and responses") {
    ProblemSource src = ProblemSource::from_corpus(24, 3);
    EvaluateOptions opt;
    NoiseProfile prof;
    prof.flip_rate_base = 0.3;
    prof.seed = 2;
    opt.noise = prof;
    const EvaluationReport rep = evaluate(src, opt);
    const nlohmann::json j = nlohmann::json::parse(to_json(rep).dump());
    CHECK(j["solver"] == "pcm");
    CHECK(j["problem_set"]["kind"] == "corpus");
    CHECK(j["problem_set"]["count"] == 24);
    CHECK(j["noise"]["flip_rate_base"] == doctest::Approx(0.3));
    CHECK(j["noise"]["cls_accuracy_subregion"] == doctest::Approx(1.0));
    double correct = 0.0;
    std::uint64_t total = 0;
    for (const auto& [key, cell] : j["cells"].items()) {
        CHECK_NOTHROW(condition_from_key(key));
        correct += cell["correct"].get<double>();
        const std::uint64_t cell_total = cell["total"].get<std::uint64_t>();
        total += cell_total;
        std::uint64_t responses = 0;
        for (const auto& [kind, n] : cell["responses"].items())
            responses += n.get<std::uint64_t>();
        CHECK(responses == cell_total);
        if (cell_total > 0) {
            double frac = 0.0;
            for (const auto& [kind, share] :
                 cell["response_distribution"].items())
                frac += share.get<double>();
            CHECK(frac == doctest::Approx(1.0));
        }
    }
    CHECK(total == 24);
    CHECK(j["overall_accuracy"].get<double>() ==
          doctest::Approx(correct / total));
}

TEST_CASE("rmsd against human reference lands in the report") {
    const auto path = write_csv("partva_human_rep.csv", kCanonicalCsv);
    const HumanReference human = load_human_reference(path);
    std::filesystem::remove(path);

    ProblemSource src = ProblemSource::from_set(build_test_set(7));
    EvaluateOptions opt;
    opt.human = &human;
    const EvaluationReport rep = evaluate(src, opt);
    REQUIRE(rep.rmsd_vs_human.has_value());
    // All cells 1.0 against the canonical reference cells.
    std::array<double, 8> ones;
    ones.fill(1.0);
    CHECK(*rep.rmsd_vs_human ==
          doctest::Approx(rmsd(ones, human.cell_accuracy)));
    CHECK(rep.human_overall == doctest::Approx(0.61));
}

}  // eval
