#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "partva/baselines.hpp"
#include "partva/noise.hpp"
#include "partva/problem.hpp"
#include "partva/problem_io.hpp"

namespace partva {

// Reference accuracies from the human study, in canonical cell order.
struct HumanReference {
    std::array<double, kNumConditionCells> cell_accuracy{};
    double overall = 0.0;
    std::string source_note;
};

// Published model-vs-human RMSD anchors, shown as reference lines next to
// any freshly computed RMSD.
inline constexpr double kReferenceRmsdSiamese = 0.24;
inline constexpr double kReferenceRmsdRelationNet = 0.17;
inline constexpr double kReferenceRmsdPcm = 0.07;

// CSV with a `condition,accuracy` header, one row per condition key plus an
// `overall` row. Lines starting with `#` are comments; a `# note:` comment is
// kept as the source note. Every cell must appear exactly once with an
// accuracy in [0, 1].
HumanReference load_human_reference(const std::filesystem::path& path);

double rmsd(std::span<const double> a, std::span<const double> b);

// Differences of marginal means across the three condition factors:
// same - different, visible - invisible, part - piece. Cells with no data
// are skipped; a factor with an entirely empty side comes out NaN.
struct MainEffects {
    double orientation = 0.0;
    double visibility = 0.0;
    double granularity = 0.0;
};
MainEffects main_effects(
    std::span<const double, kNumConditionCells> cell_accuracy);
MainEffects main_effects(
    std::span<const double, kNumConditionCells> cell_accuracy,
    std::span<const std::uint64_t, kNumConditionCells> cell_totals);

enum class SolverKind : std::uint8_t { pcm, pcm_two_term, shortcut, random };

std::string_view to_string(SolverKind k);
SolverKind solver_from_string(std::string_view s);

// Uniform sequential access to the three ways a problem set can exist:
// in memory, streamed from a saved directory, or generated on the fly.
// Generated and in-memory sources hash their problems as they stream
// through, so content_hash() matches what save_problem_set would record.
class ProblemSource {
  public:
    static ProblemSource from_set(ProblemSet set);
    static ProblemSource from_corpus(std::uint64_t count, std::uint64_t seed);
    static ProblemSource from_dir(const std::filesystem::path& dir);

    SetKind kind() const { return kind_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t count() const { return count_; }
    bool done() const { return next_ == count_; }
    AnalogyProblem next();

    // "fnv1a64:<hex>". Known upfront for directory sources; available once
    // the source is exhausted otherwise.
    std::string content_hash() const;

  private:
    ProblemSource() = default;

    SetKind kind_ = SetKind::test128;
    std::uint64_t seed_ = 0;
    std::uint64_t count_ = 0;
    std::uint64_t next_ = 0;
    std::optional<ProblemSet> set_;
    std::optional<ProblemSetReader> reader_;
    std::string fixed_hash_;
    SetHasher hasher_;
};

struct CellStats {
    std::uint64_t total = 0;
    std::uint64_t correct = 0;
    // Chosen-option tallies indexed by OptionKind.
    std::array<std::uint64_t, 5> responses{};

    double accuracy() const;  // NaN when empty
};

struct EvaluationReport {
    std::string solver_id;
    SetKind set_kind = SetKind::test128;
    std::uint64_t set_seed = 0;
    std::uint64_t set_count = 0;
    std::string set_hash;
    std::optional<NoiseProfile> noise;  // nullopt = ground-truth perception
    std::uint64_t solver_seed = 0;
    double overall = 0.0;
    std::array<CellStats, kNumConditionCells> cells{};
    MainEffects effects;
    std::optional<double> rmsd_vs_human;
    std::optional<double> human_overall;
    std::vector<std::string> notes;

    std::array<double, kNumConditionCells> cell_accuracies() const;
};

struct EvaluateOptions {
    SolverKind solver = SolverKind::pcm;
    std::uint64_t solver_seed = 0;          // random baseline only
    ShortcutMetric shortcut_metric = ShortcutMetric::cosine;
    std::optional<NoiseProfile> noise;      // nullopt = ground truth
    const HumanReference* human = nullptr;  // enables rmsd_vs_human
    std::ostream* results_csv = nullptr;    // one row per problem
    std::ostream* features_csv = nullptr;   // seven rows per problem
};

// Runs the solver over every problem in the source. Perception randomness
// is keyed by image content: each map's base stream is split(noise.seed,
// fnv1a64(cells)), with segmentation drawing from split(base, 1) and the
// classifier from split(base, 2), so identical images always perceive
// identically (the wrong-car option shows the same picture as B). The random
// baseline draws from split(solver_seed, problem_index) and skips perception
// entirely.
EvaluationReport evaluate(ProblemSource& source, const EvaluateOptions& options);

nlohmann::ordered_json to_json(const EvaluationReport& report);

}  // namespace partva
