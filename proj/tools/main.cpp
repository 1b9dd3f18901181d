#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "partva/baselines.hpp"
#include "partva/evaluate.hpp"
#include "partva/label_map.hpp"
#include "partva/noise.hpp"
#include "partva/png_io.hpp"
#include "partva/problem.hpp"
#include "partva/problem_io.hpp"

namespace fs = std::filesystem;

namespace {

using namespace partva;

// Exit codes: 0 success, 1 usage, 2 data error, 3 internal invariant
// violation, 4 calibration finished without reaching its target.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;
constexpr int kExitCalibrationWarning = 4;

nlohmann::json load_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

void print_reference_rmsd_lines(std::ostream& out) {
    out << "reference rmsd vs human: siamese " << fmt3(kReferenceRmsdSiamese)
        << ", relation-net " << fmt3(kReferenceRmsdRelationNet) << ", pcm "
        << fmt3(kReferenceRmsdPcm) << "\n";
}

struct GenerateArgs {
    std::string kind = "test";
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> count;
    std::string out;
};

int cmd_generate(const GenerateArgs& args) {
    const SetKind kind =
        args.kind == "corpus" ? SetKind::corpus : SetKind::test128;
    Manifest manifest;
    if (kind == SetKind::test128) {
        if (args.count && *args.count != kTestSetSize) {
            std::cerr << "error: the test set always has " << kTestSetSize
                      << " problems; omit --count\n";
            return kExitUsage;
        }
        manifest = save_problem_set(build_test_set(args.seed), args.out);
    } else {
        if (!args.count) {
            std::cerr << "error: --count is required for --kind corpus\n";
            return kExitUsage;
        }
        ProblemSetWriter writer(args.out, SetKind::corpus, args.seed);
        for (std::uint64_t i = 0; i < *args.count; ++i)
            writer.append(corpus_problem(args.seed, i));
        manifest = writer.finalize();
    }
    std::cout << "wrote " << args.out << ": kind=" << to_string(manifest.kind)
              << " seed=" << manifest.seed << " count=" << manifest.count
              << " " << manifest.content_hash << "\n";
    return kExitOk;
}

struct SolveArgs {
    std::string problems;
    std::string solver = "pcm";
    std::uint64_t seed = 0;
    std::string shortcut_metric = "cosine";
    std::string noise_path;
    bool no_noise = false;
    std::string human_path;
    std::string out;
    bool features = false;
};

void print_report_summary(const EvaluationReport& rep) {
    std::cout << "solver: " << rep.solver_id << "\n";
    std::cout << "problems: kind=" << to_string(rep.set_kind)
              << " seed=" << rep.set_seed << " count=" << rep.set_count << " "
              << rep.set_hash << "\n";
    std::cout << "noise: "
              << (rep.noise ? to_json(*rep.noise).dump() : "none") << "\n";
    std::cout << "cell accuracies:\n";
    for (int i = 0; i < kNumConditionCells; ++i) {
        const CellStats& cs = rep.cells[i];
        std::cout << "  " << condition_from_cell(i).key() << ": "
                  << (cs.total == 0 ? "n/a" : fmt3(cs.accuracy())) << " ("
                  << cs.correct << "/" << cs.total << ")\n";
    }
    std::cout << "main effects: orientation "
              << fmt3(rep.effects.orientation) << ", visibility "
              << fmt3(rep.effects.visibility) << ", granularity "
              << fmt3(rep.effects.granularity) << "\n";
    std::cout << "overall accuracy: " << fmt3(rep.overall) << "\n";
    if (rep.rmsd_vs_human) {
        std::cout << "rmsd vs human: " << fmt3(*rep.rmsd_vs_human)
                  << " (human overall " << fmt3(*rep.human_overall) << ")\n";
        print_reference_rmsd_lines(std::cout);
    }
    for (const std::string& note : rep.notes)
        std::cout << "note: " << note << "\n";
}

int cmd_solve(const SolveArgs& args) {
    ProblemSource source = ProblemSource::from_dir(args.problems);

    EvaluateOptions opts;
    opts.solver = solver_from_string(args.solver);
    opts.solver_seed = args.seed;
    opts.shortcut_metric = shortcut_metric_from_string(args.shortcut_metric);
    if (!args.noise_path.empty())
        opts.noise = noise_profile_from_json(load_json(args.noise_path));

    HumanReference human;
    if (!args.human_path.empty()) {
        human = load_human_reference(args.human_path);
        opts.human = &human;
    }

    fs::create_directories(args.out);
    std::ofstream results(fs::path(args.out) / "results.csv", std::ios::binary);
    if (!results)
        throw std::runtime_error("cannot open for writing: " + args.out +
                                 "/results.csv");
    opts.results_csv = &results;
    std::ofstream features;
    if (args.features) {
        features.open(fs::path(args.out) / "features.csv", std::ios::binary);
        if (!features)
            throw std::runtime_error("cannot open for writing: " + args.out +
                                     "/features.csv");
        opts.features_csv = &features;
    }

    const EvaluationReport report = evaluate(source, opts);
    write_text(fs::path(args.out) / "report.json",
               to_json(report).dump(2) + "\n");
    print_report_summary(report);
    return kExitOk;
}

struct AblateArgs {
    std::string problems;
    std::string out;
};

int cmd_ablate(const AblateArgs& args) {
    ProblemSetReader reader((fs::path(args.problems)));
    ProblemSetWriter writer(args.out, reader.manifest().kind,
                            reader.manifest().seed);
    while (!reader.done()) writer.append(ablate_two_term(reader.next()));
    reader.verify_hash();
    const Manifest manifest = writer.finalize();
    std::cout << "wrote " << args.out << ": kind=" << to_string(manifest.kind)
              << " seed=" << manifest.seed << " count=" << manifest.count
              << " " << manifest.content_hash << "\n";
    std::cout << "note: whole-car images replaced by blank maps (the "
                 "blank-map feature convention is a declared stand-in)\n";
    return kExitOk;
}

struct CalibrateArgs {
    double target = 0.57;
    std::string problems;
    std::string out;
    std::uint64_t seed = 0;
    int band = 2;
    std::uint64_t max_sample = 64;
};

int cmd_calibrate(const CalibrateArgs& args) {
    // Sample the distinct whole-car maps (A and C) from the set.
    ProblemSetReader reader((fs::path(args.problems)));
    std::vector<LabelMap> sample;
    std::unordered_set<std::uint64_t> seen;
    while (!reader.done() && sample.size() < args.max_sample) {
        const AnalogyProblem p = reader.next();
        for (const LabelMap* m : {&p.a, &p.c}) {
            if (sample.size() >= args.max_sample) break;
            if (seen.insert(fnv1a64(to_valm(*m))).second) sample.push_back(*m);
        }
    }
    if (sample.empty()) throw std::runtime_error("problem set has no maps");

    NoiseProfile base;
    base.seed = args.seed;
    base.boundary_band = args.band;
    const CalibrationResult result = calibrate_noise(args.target, sample, base);

    write_text(args.out, to_json(result.profile).dump(2) + "\n");
    std::cout << "calibrated flip_rate_base="
              << result.profile.flip_rate_base << " achieved_miou="
              << result.achieved << " target=" << args.target
              << " iterations=" << result.iterations << " sample_maps="
              << sample.size() << "\n";
    std::cout << "wrote " << args.out << "\n";
    if (!result.converged) {
        std::cout << "warning: target mIoU not reached within tolerance\n";
        return kExitCalibrationWarning;
    }
    return kExitOk;
}

struct EvalArgs {
    std::string report_path;
    std::string human_path;
    std::string out;
};

int cmd_eval(const EvalArgs& args) {
    const nlohmann::json report = load_json(args.report_path);
    const HumanReference human = load_human_reference(args.human_path);

    if (!report.contains("cells"))
        throw std::runtime_error(args.report_path + ": missing 'cells'");
    std::array<double, kNumConditionCells> model{};
    for (int i = 0; i < kNumConditionCells; ++i) {
        const std::string key = condition_from_cell(i).key();
        if (!report["cells"].contains(key))
            throw std::runtime_error(args.report_path + ": missing cell '" +
                                     key + "'");
        const auto& acc = report["cells"][key]["accuracy"];
        if (!acc.is_number())
            throw std::runtime_error(args.report_path + ": cell '" + key +
                                     "' has no accuracy (empty cell?)");
        model[i] = acc.get<double>();
    }
    const std::string solver = report.value("solver", std::string("unknown"));
    const double overall = report.value("overall_accuracy", 0.0);

    const double deviation = rmsd(model, human.cell_accuracy);
    const MainEffects effects = main_effects(model);

    std::cout << "solver: " << solver << "\n";
    std::cout << "overall accuracy: " << fmt3(overall) << " (human overall "
              << fmt3(human.overall) << ")\n";
    std::cout << "rmsd vs human: " << fmt3(deviation) << "\n";
    print_reference_rmsd_lines(std::cout);
    std::cout << "main effects: orientation " << fmt3(effects.orientation)
              << ", visibility " << fmt3(effects.visibility)
              << ", granularity " << fmt3(effects.granularity) << "\n";
    if (!human.source_note.empty())
        std::cout << "note: " << human.source_note << "\n";

    if (!args.out.empty()) {
        nlohmann::ordered_json j;
        j["solver"] = solver;
        j["overall_accuracy"] = overall;
        j["human_overall"] = human.overall;
        j["rmsd_vs_human"] = deviation;
        j["reference_rmsd"] = {{"siamese", kReferenceRmsdSiamese},
                               {"relation_net", kReferenceRmsdRelationNet},
                               {"pcm", kReferenceRmsdPcm}};
        j["main_effects"] = {
            {"orientation_same_minus_different", effects.orientation},
            {"visible_minus_invisible", effects.visibility},
            {"part_minus_piece", effects.granularity}};
        if (!human.source_note.empty()) j["human_note"] = human.source_note;
        write_text(args.out, j.dump(2) + "\n");
        std::cout << "wrote " << args.out << "\n";
    }
    return kExitOk;
}

struct RenderArgs {
    std::string problems;
    std::string map_path;
    std::string out;
    int scale = 1;
};

int cmd_render(const RenderArgs& args) {
    if (!args.map_path.empty()) {
        save_png(load_valm(args.map_path), args.out, args.scale);
        std::cout << "wrote " << args.out << "\n";
        return kExitOk;
    }
    const fs::path maps_dir = fs::path(args.problems) / "maps";
    if (!fs::is_directory(maps_dir))
        throw std::runtime_error("not a problem set (no maps/): " +
                                 args.problems);
    std::vector<fs::path> valms;
    for (const auto& entry : fs::directory_iterator(maps_dir))
        if (entry.path().extension() == ".valm") valms.push_back(entry.path());
    std::sort(valms.begin(), valms.end());

    fs::create_directories(args.out);
    for (const fs::path& valm : valms) {
        const fs::path png =
            fs::path(args.out) / (valm.stem().string() + ".png");
        save_png(load_valm(valm), png, args.scale);
    }
    std::cout << "wrote " << valms.size() << " png files to " << args.out
              << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"part-whole visual analogy benchmark and solvers"};
    app.require_subcommand(1);

    GenerateArgs gen;
    CLI::App* generate =
        app.add_subcommand("generate", "write a problem set directory");
    generate->add_option("--kind", gen.kind, "problem set kind")
        ->check(CLI::IsMember({"test", "test128", "corpus"}))
        ->capture_default_str();
    generate->add_option("--seed", gen.seed, "master seed")->required();
    generate->add_option("--count", gen.count,
                         "number of problems (corpus only)")
        ->check(CLI::PositiveNumber);
    generate->add_option("--out", gen.out, "output directory")->required();

    SolveArgs solve;
    CLI::App* solve_cmd =
        app.add_subcommand("solve", "run a solver over a problem set");
    solve_cmd->add_option("--problems", solve.problems, "problem set directory")
        ->required();
    solve_cmd->add_option("--solver", solve.solver, "solver id")
        ->check(CLI::IsMember({"pcm", "pcm_two_term", "shortcut", "random"}))
        ->capture_default_str();
    solve_cmd->add_option("--seed", solve.seed, "solver seed (random baseline)")
        ->capture_default_str();
    solve_cmd
        ->add_option("--shortcut-metric", solve.shortcut_metric,
                     "similarity for the shortcut solver")
        ->check(CLI::IsMember({"cosine", "hamming"}))
        ->capture_default_str();
    CLI::Option* noise_opt = solve_cmd->add_option(
        "--noise", solve.noise_path, "noise profile JSON");
    solve_cmd
        ->add_flag("--no-noise", solve.no_noise,
                   "ground-truth perception (the default, made explicit)")
        ->excludes(noise_opt);
    solve_cmd->add_option("--human", solve.human_path,
                          "human reference CSV for RMSD");
    solve_cmd->add_option("--out", solve.out, "output directory")->required();
    solve_cmd->add_flag("--features", solve.features,
                        "also write features.csv");

    AblateArgs ablate;
    CLI::App* ablate_cmd = app.add_subcommand(
        "ablate", "blank the whole-car images of every problem");
    ablate_cmd->add_option("--problems", ablate.problems,
                           "problem set directory")
        ->required();
    ablate_cmd->add_option("--out", ablate.out, "output directory")->required();

    CalibrateArgs cal;
    CLI::App* cal_cmd = app.add_subcommand(
        "calibrate", "fit the flip rate to a target segmentation mIoU");
    cal_cmd->add_option("--target", cal.target, "target mIoU")
        ->capture_default_str();
    cal_cmd->add_option("--problems", cal.problems,
                        "problem set supplying sample maps")
        ->required();
    cal_cmd->add_option("--out", cal.out, "output profile JSON")->required();
    cal_cmd->add_option("--seed", cal.seed, "noise seed")->capture_default_str();
    cal_cmd->add_option("--band", cal.band, "boundary band in pixels")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cal_cmd->add_option("--max-sample", cal.max_sample,
                        "max distinct whole-car maps to sample")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    EvalArgs eval;
    CLI::App* eval_cmd = app.add_subcommand(
        "eval", "compare a solve report against human reference cells");
    eval_cmd->add_option("--report", eval.report_path, "report JSON from solve")
        ->required();
    eval_cmd->add_option("--human", eval.human_path, "human reference CSV")
        ->required();
    eval_cmd->add_option("--out", eval.out, "optional output JSON");

    RenderArgs render;
    CLI::App* render_cmd =
        app.add_subcommand("render", "export label maps as PNG");
    CLI::Option* problems_opt = render_cmd->add_option(
        "--problems", render.problems, "problem set directory");
    render_cmd
        ->add_option("--map", render.map_path, "single VALM file instead")
        ->excludes(problems_opt);
    render_cmd->add_option("--out", render.out, "output directory (or PNG path with --map)")
        ->required();
    render_cmd->add_option("--scale", render.scale, "integer upscale factor")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (generate->parsed()) return cmd_generate(gen);
        if (solve_cmd->parsed()) return cmd_solve(solve);
        if (ablate_cmd->parsed()) return cmd_ablate(ablate);
        if (cal_cmd->parsed()) return cmd_calibrate(cal);
        if (eval_cmd->parsed()) return cmd_eval(eval);
        if (render_cmd->parsed()) {
            if (render.problems.empty() && render.map_path.empty()) {
                std::cerr << "error: render needs --problems or --map\n";
                return kExitUsage;
            }
            return cmd_render(render);
        }
        std::cerr << "error: no subcommand\n";
        return kExitUsage;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
