#include "partva/evaluate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "partva/baselines.hpp"
#include "partva/features.hpp"

namespace partva {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string trimmed(std::string s) {
    const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && is_space(static_cast<unsigned char>(s[start]))) ++start;
    return s.substr(start);
}

}  // namespace

HumanReference load_human_reference(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());

    HumanReference ref;
    std::array<bool, kNumConditionCells> seen{};
    bool seen_overall = false;
    bool seen_header = false;
    std::string line;
    int line_no = 0;
    auto fail = [&](const std::string& msg) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                 ": " + msg);
    };
    while (std::getline(in, line)) {
        ++line_no;
        line = trimmed(line);
        if (line.empty()) continue;
        if (line.front() == '#') {
            if (const std::string_view note_tag = "# note:";
                line.rfind(note_tag, 0) == 0)
                ref.source_note = trimmed(line.substr(note_tag.size()));
            continue;
        }
        if (!seen_header) {
            if (line != "condition,accuracy")
                fail("expected header 'condition,accuracy'");
            seen_header = true;
            continue;
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) fail("expected 'condition,accuracy' row");
        const std::string key = trimmed(line.substr(0, comma));
        const std::string value_text = trimmed(line.substr(comma + 1));
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(value_text, &used);
            if (used != value_text.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            fail("bad accuracy value: '" + value_text + "'");
        }
        if (value < 0.0 || value > 1.0) fail("accuracy outside [0, 1]");
        if (key == "overall") {
            if (seen_overall) fail("duplicate overall row");
            seen_overall = true;
            ref.overall = value;
            continue;
        }
        Condition cond;
        try {
            cond = condition_from_key(key);
        } catch (const std::exception&) {
            fail("unknown condition key: '" + key + "'");
        }
        if (seen[cond.cell_index()]) fail("duplicate condition: '" + key + "'");
        seen[cond.cell_index()] = true;
        ref.cell_accuracy[cond.cell_index()] = value;
    }
    if (!seen_header)
        throw std::runtime_error(path.string() + ": missing header row");
    for (int i = 0; i < kNumConditionCells; ++i)
        if (!seen[i])
            throw std::runtime_error(path.string() + ": missing condition '" +
                                     condition_from_cell(i).key() + "'");
    if (!seen_overall)
        throw std::runtime_error(path.string() + ": missing overall row");
    return ref;
}

double rmsd(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("rmsd: size mismatch or empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(a.size()));
}

MainEffects main_effects(
    std::span<const double, kNumConditionCells> cell_accuracy) {
    std::array<std::uint64_t, kNumConditionCells> ones;
    ones.fill(1);
    return main_effects(cell_accuracy, ones);
}

MainEffects main_effects(
    std::span<const double, kNumConditionCells> cell_accuracy,
    std::span<const std::uint64_t, kNumConditionCells> cell_totals) {
    // Factor bit positions inside the cell index; bit clear = first level.
    const auto level_mean = [&](int bit, bool second_level) {
        double sum = 0.0;
        int n = 0;
        for (int cell = 0; cell < kNumConditionCells; ++cell) {
            if (cell_totals[cell] == 0) continue;
            if ((((cell >> bit) & 1) == 1) != second_level) continue;
            sum += cell_accuracy[cell];
            ++n;
        }
        return n == 0 ? kNaN : sum / n;
    };
    MainEffects e;
    e.orientation = level_mean(2, false) - level_mean(2, true);
    e.visibility = level_mean(1, false) - level_mean(1, true);
    e.granularity = level_mean(0, false) - level_mean(0, true);
    return e;
}

std::string_view to_string(SolverKind k) {
    switch (k) {
        case SolverKind::pcm: return "pcm";
        case SolverKind::pcm_two_term: return "pcm_two_term";
        case SolverKind::shortcut: return "shortcut";
        case SolverKind::random: return "random";
    }
    throw std::logic_error("bad solver kind");
}

SolverKind solver_from_string(std::string_view s) {
    if (s == "pcm") return SolverKind::pcm;
    if (s == "pcm_two_term") return SolverKind::pcm_two_term;
    if (s == "shortcut") return SolverKind::shortcut;
    if (s == "random") return SolverKind::random;
    throw std::runtime_error("unknown solver: " + std::string(s));
}

ProblemSource ProblemSource::from_set(ProblemSet set) {
    ProblemSource src;
    src.kind_ = set.kind;
    src.seed_ = set.seed;
    src.count_ = set.problems.size();
    src.set_ = std::move(set);
    return src;
}

ProblemSource ProblemSource::from_corpus(std::uint64_t count, std::uint64_t seed) {
    if (count == 0) throw std::invalid_argument("corpus size must be positive");
    ProblemSource src;
    src.kind_ = SetKind::corpus;
    src.seed_ = seed;
    src.count_ = count;
    return src;
}

ProblemSource ProblemSource::from_dir(const std::filesystem::path& dir) {
    ProblemSource src;
    src.reader_.emplace(dir);
    const Manifest& m = src.reader_->manifest();
    src.kind_ = m.kind;
    src.seed_ = m.seed;
    src.count_ = m.count;
    src.fixed_hash_ = m.content_hash;
    return src;
}

AnalogyProblem ProblemSource::next() {
    if (next_ >= count_) throw std::logic_error("problem source exhausted");
    AnalogyProblem p;
    if (reader_) {
        p = reader_->next();
    } else if (set_) {
        p = set_->problems[static_cast<std::size_t>(next_)];
        hasher_.add(p);
    } else {
        p = corpus_problem(seed_, next_);
        hasher_.add(p);
    }
    ++next_;
    if (reader_ && next_ == count_) reader_->verify_hash();
    return p;
}

std::string ProblemSource::content_hash() const {
    if (!fixed_hash_.empty()) return fixed_hash_;
    if (next_ != count_)
        throw std::logic_error("content hash unavailable before exhaustion");
    return "fnv1a64:" + to_hex(hasher_.value());
}

double CellStats::accuracy() const {
    return total == 0 ? kNaN
                      : static_cast<double>(correct) / static_cast<double>(total);
}

std::array<double, kNumConditionCells> EvaluationReport::cell_accuracies() const {
    std::array<double, kNumConditionCells> acc;
    for (int i = 0; i < kNumConditionCells; ++i) acc[i] = cells[i].accuracy();
    return acc;
}

namespace {

constexpr std::array<std::string_view, 7> kRoleNames = {
    "a", "b", "c", "option0", "option1", "option2", "option3"};

void write_feature_header(std::ostream& out) {
    out << "problem_id,role";
    for (int i = 1; i <= kNumAggregateParts; ++i)
        out << ",part_" << aggregate_name(static_cast<AggregateId>(i));
    for (CarType t : all_car_types()) out << ",type_" << to_string(t);
    out << '\n';
}

void write_results_header(std::ostream& out) {
    out << "problem_id,condition,source_car,target_car,component,solver,"
           "chosen_index,chosen_kind,correct_index,correct,d0,d1,d2,d3\n";
}

}  // namespace

EvaluationReport evaluate(ProblemSource& source, const EvaluateOptions& opt) {
    EvaluationReport rep;
    rep.solver_id = std::string(to_string(opt.solver));
    rep.set_kind = source.kind();
    rep.set_seed = source.seed();
    rep.set_count = source.count();
    rep.noise = opt.noise;
    rep.solver_seed = opt.solver_seed;

    if (opt.results_csv) write_results_header(*opt.results_csv);
    if (opt.features_csv && opt.solver != SolverKind::random)
        write_feature_header(*opt.features_csv);

    if (opt.solver == SolverKind::pcm_two_term)
        rep.notes.push_back(
            "two-term ablation blanks the whole-car images; the blank-map "
            "feature convention (zero part block, uniform type block) is a "
            "declared stand-in");
    if (opt.solver == SolverKind::shortcut)
        rep.notes.push_back("shortcut metric: " +
                            std::string(to_string(opt.shortcut_metric)));

    std::uint64_t correct_total = 0;
    for (std::uint64_t index = 0; !source.done(); ++index) {
        AnalogyProblem p = source.next();
        if (opt.solver == SolverKind::pcm_two_term)
            p = ablate_two_term(std::move(p));

        int chosen = 0;
        std::array<double, 4> distances{};
        bool have_distances = false;

        const auto solve_one = [&] {
            if (opt.solver == SolverKind::random) {
                rng::SplitMix64 stream(rng::split(opt.solver_seed, index));
                chosen = solve_random(stream);
                return;
            }
            const std::array<const LabelMap*, 7> truth = {
                &p.a,          &p.b,          &p.c,         &p.options[0],
                &p.options[1], &p.options[2], &p.options[3]};
            const std::array<CarType, 7> types = {
                p.source_car,     p.source_car,     p.target_car,
                p.option_cars[0], p.option_cars[1], p.option_cars[2],
                p.option_cars[3]};

            std::array<LabelMap, 7> perceived;
            std::array<FeatureVector, 7> feats;
            const bool noisy = opt.noise.has_value();
            for (int m = 0; m < 7; ++m) {
                CarTypePrediction pred;
                if (noisy) {
                    // Perception is a fixed function of the image: streams are
                    // keyed by map content, so identical images (e.g. B and the
                    // wrong-car option) always yield identical percepts.
                    const auto& bytes = truth[m]->cells();
                    const std::uint64_t key = fnv1a64(
                        std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                         bytes.size()),
                        0xCBF29CE484222325ull ^
                            static_cast<std::uint64_t>(truth[m]->width()));
                    const std::uint64_t base = rng::split(opt.noise->seed, key);
                    rng::SplitMix64 seg(rng::split(base, 1));
                    perceived[m] = corrupt_segmentation(*truth[m], *opt.noise,
                                                        p.condition, seg);
                    rng::SplitMix64 cls(rng::split(base, 2));
                    const ImageKind kind = (m == 0 || m == 2)
                                               ? ImageKind::whole
                                               : ImageKind::subregion;
                    pred = simulate_classifier(types[m], kind, *opt.noise, cls);
                    feats[m] = extract_features(perceived[m], pred);
                } else {
                    pred = CarTypePrediction::one_hot(types[m]);
                    feats[m] = extract_features(*truth[m], pred);
                }
            }

            PcmDecision decision;
            switch (opt.solver) {
                case SolverKind::pcm:
                case SolverKind::pcm_two_term:
                    decision = solve_pcm(feats);
                    break;
                case SolverKind::shortcut: {
                    const LabelMap* option_maps =
                        noisy ? &perceived[3] : p.options.data();
                    decision = solve_shortcut(
                        noisy ? perceived[1] : p.b,
                        std::span<const LabelMap>(option_maps, 4), feats[1],
                        std::span<const FeatureVector>(&feats[3], 4),
                        opt.shortcut_metric);
                    break;
                }
                case SolverKind::random:
                    throw std::logic_error("unreachable");
            }
            chosen = decision.chosen_index;
            distances = decision.distances;
            have_distances = true;

            if (opt.features_csv)
                for (int m = 0; m < 7; ++m)
                    append_feature_csv(*opt.features_csv, p.problem_id,
                                       kRoleNames[m], feats[m]);
        };
        try {
            solve_one();
        } catch (const std::exception& e) {
            throw std::runtime_error("solver failed on problem " +
                                     p.problem_id + ": " + e.what());
        }

        CellStats& cs = rep.cells[p.condition.cell_index()];
        ++cs.total;
        const bool is_correct = chosen == p.correct_index;
        if (is_correct) {
            ++cs.correct;
            ++correct_total;
        }
        ++cs.responses[static_cast<int>(p.option_kinds[chosen])];

        if (opt.results_csv) {
            std::ostream& out = *opt.results_csv;
            out << p.problem_id << ',' << p.condition.key() << ','
                << to_string(p.source_car) << ',' << to_string(p.target_car)
                << ',' << to_string(p.component) << ',' << rep.solver_id << ','
                << chosen << ',' << to_string(p.option_kinds[chosen]) << ','
                << p.correct_index << ',' << (is_correct ? 1 : 0);
            for (int i = 0; i < 4; ++i) {
                out << ',';
                if (have_distances) out << fmt_g(distances[i]);
            }
            out << '\n';
        }
    }

    rep.set_hash = source.content_hash();
    rep.overall = rep.set_count == 0 ? kNaN
                                     : static_cast<double>(correct_total) /
                                           static_cast<double>(rep.set_count);

    const std::array<double, kNumConditionCells> acc = rep.cell_accuracies();
    std::array<std::uint64_t, kNumConditionCells> totals;
    int empty_cells = 0;
    for (int i = 0; i < kNumConditionCells; ++i) {
        totals[i] = rep.cells[i].total;
        if (totals[i] == 0) ++empty_cells;
    }
    rep.effects = main_effects(acc, totals);
    if (empty_cells > 0)
        rep.notes.push_back(std::to_string(empty_cells) +
                            " condition cell(s) have no problems; marginal "
                            "means skip them");

    if (opt.human) {
        if (empty_cells == 0) {
            rep.rmsd_vs_human = rmsd(acc, opt.human->cell_accuracy);
            rep.human_overall = opt.human->overall;
        } else {
            rep.notes.push_back(
                "rmsd_vs_human omitted: not every condition cell has problems");
        }
    }
    return rep;
}

nlohmann::ordered_json to_json(const EvaluationReport& rep) {
    nlohmann::ordered_json j;
    j["solver"] = rep.solver_id;
    j["problem_set"] = {{"kind", std::string(to_string(rep.set_kind))},
                        {"seed", rep.set_seed},
                        {"count", rep.set_count},
                        {"content_hash", rep.set_hash}};
    j["noise"] = rep.noise ? to_json(*rep.noise) : nlohmann::ordered_json();
    j["solver_seed"] = rep.solver_seed;
    j["overall_accuracy"] = rep.overall;
    nlohmann::ordered_json cells;
    for (int i = 0; i < kNumConditionCells; ++i) {
        const CellStats& cs = rep.cells[i];
        nlohmann::ordered_json responses;
        nlohmann::ordered_json distribution;
        for (int k = 0; k < 5; ++k) {
            const std::string name(to_string(static_cast<OptionKind>(k)));
            responses[name] = cs.responses[k];
            distribution[name] =
                cs.total == 0 ? kNaN
                              : static_cast<double>(cs.responses[k]) /
                                    static_cast<double>(cs.total);
        }
        cells[condition_from_cell(i).key()] = {
            {"total", cs.total},
            {"correct", cs.correct},
            {"accuracy", cs.accuracy()},
            {"responses", responses},
            {"response_distribution", distribution}};
    }
    j["cells"] = std::move(cells);
    j["main_effects"] = {
        {"orientation_same_minus_different", rep.effects.orientation},
        {"visible_minus_invisible", rep.effects.visibility},
        {"part_minus_piece", rep.effects.granularity}};
    j["rmsd_vs_human"] =
        rep.rmsd_vs_human ? nlohmann::ordered_json(*rep.rmsd_vs_human)
                          : nlohmann::ordered_json();
    j["human_overall"] = rep.human_overall
                             ? nlohmann::ordered_json(*rep.human_overall)
                             : nlohmann::ordered_json();
    j["notes"] = rep.notes;
    return j;
}

}  // namespace partva
