// Python surface over the core library. Maps cross as numpy uint8 arrays;
// everything else is thin field-for-field bindings plus keyword-argument
// wrappers where the C++ side wants spans or rng streams.
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "partva/baselines.hpp"
#include "partva/evaluate.hpp"
#include "partva/features.hpp"
#include "partva/label_map.hpp"
#include "partva/noise.hpp"
#include "partva/png_io.hpp"
#include "partva/problem.hpp"
#include "partva/problem_io.hpp"
#include "partva/rng.hpp"
#include "partva/scene.hpp"
#include "partva/taxonomy.hpp"

namespace py = pybind11;
using namespace partva;

namespace {

py::array_t<std::uint8_t> map_to_numpy(const LabelMap& m) {
    py::array_t<std::uint8_t> arr({m.height(), m.width()});
    std::memcpy(arr.mutable_data(), m.cells().data(), m.cells().size());
    return arr;
}

LabelMap map_from_numpy(
    const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>&
        arr,
    LabelSpace space) {
    if (arr.ndim() != 2)
        throw std::invalid_argument("expected a 2-D uint8 array of labels");
    LabelMap m(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)),
               space);
    std::memcpy(m.cells().data(), arr.data(), m.cells().size());
    return m;
}

std::array<FeatureVector, 7> seven(const std::vector<FeatureVector>& v) {
    if (v.size() != 7)
        throw std::invalid_argument("expected 7 feature vectors (A,B,C,D1..D4)");
    std::array<FeatureVector, 7> a;
    std::copy(v.begin(), v.end(), a.begin());
    return a;
}

}  // namespace

PYBIND11_MODULE(_partva, m) {
    m.doc() = "part-whole visual analogy benchmark core";
    m.attr("__version__") = "0.1.0";
    m.attr("SCENE_WIDTH") = kSceneWidth;
    m.attr("SCENE_HEIGHT") = kSceneHeight;
    m.attr("FEATURE_DIM") = kFeatureDim;
    m.attr("PART_BLOCK_DIM") = kPartBlockDim;
    m.attr("TYPE_BLOCK_DIM") = kTypeBlockDim;
    m.attr("NUM_CONDITION_CELLS") = kNumConditionCells;
    m.attr("TEST_SET_SIZE") = kTestSetSize;
    m.attr("REFERENCE_RMSD_SIAMESE") = kReferenceRmsdSiamese;
    m.attr("REFERENCE_RMSD_RELATION_NET") = kReferenceRmsdRelationNet;
    m.attr("REFERENCE_RMSD_PCM") = kReferenceRmsdPcm;

    py::enum_<CarType>(m, "CarType")
        .value("sedan", CarType::sedan)
        .value("suv", CarType::suv)
        .value("wagon", CarType::wagon)
        .value("truck", CarType::truck)
        .value("minivan", CarType::minivan);
    py::enum_<Orientation>(m, "Orientation")
        .value("left", Orientation::left)
        .value("right", Orientation::right);
    py::enum_<Granularity>(m, "Granularity")
        .value("part", Granularity::part)
        .value("piece", Granularity::piece);
    py::enum_<ComponentId>(m, "ComponentId")
        .value("door_window", ComponentId::door_window)
        .value("hood_windshield", ComponentId::hood_windshield)
        .value("trunk_bumper", ComponentId::trunk_bumper)
        .value("headlight_wheel", ComponentId::headlight_wheel);
    py::enum_<LabelSpace>(m, "LabelSpace")
        .value("fine", LabelSpace::fine)
        .value("aggregate", LabelSpace::aggregate);
    py::enum_<OptionKind>(m, "OptionKind")
        .value("correct", OptionKind::correct)
        .value("wrong_subregion", OptionKind::wrong_subregion)
        .value("wrong_car", OptionKind::wrong_car)
        .value("both_wrong", OptionKind::both_wrong)
        .value("corpus_random", OptionKind::corpus_random);
    py::enum_<SetKind>(m, "SetKind")
        .value("test128", SetKind::test128)
        .value("corpus", SetKind::corpus);
    py::enum_<SolverKind>(m, "SolverKind")
        .value("pcm", SolverKind::pcm)
        .value("pcm_two_term", SolverKind::pcm_two_term)
        .value("shortcut", SolverKind::shortcut)
        .value("random", SolverKind::random);
    py::enum_<ShortcutMetric>(m, "ShortcutMetric")
        .value("cosine", ShortcutMetric::cosine)
        .value("hamming", ShortcutMetric::hamming);
    py::enum_<ImageKind>(m, "ImageKind")
        .value("whole", ImageKind::whole)
        .value("subregion", ImageKind::subregion);

    py::class_<LabelMap>(m, "LabelMap")
        .def(py::init<int, int, LabelSpace>(), py::arg("width"),
             py::arg("height"), py::arg("space") = LabelSpace::fine)
        .def_property_readonly("width", &LabelMap::width)
        .def_property_readonly("height", &LabelMap::height)
        .def_property_readonly("space", &LabelMap::space)
        .def("at", &LabelMap::at, py::arg("x"), py::arg("y"))
        .def("set", &LabelMap::set, py::arg("x"), py::arg("y"),
             py::arg("label"))
        .def("fill_rect", &LabelMap::fill_rect, py::arg("x0"), py::arg("y0"),
             py::arg("x1"), py::arg("y1"), py::arg("label"))
        .def("crop", &LabelMap::crop, py::arg("x0"), py::arg("y0"),
             py::arg("x1"), py::arg("y1"))
        .def("count", &LabelMap::count, py::arg("label"))
        .def("foreground_count", &LabelMap::foreground_count)
        .def("to_numpy", &map_to_numpy,
             "copy of the grid as a (height, width) uint8 array")
        .def_static("from_numpy", &map_from_numpy, py::arg("array"),
                    py::arg("space") = LabelSpace::fine)
        .def(py::self == py::self)
        .def("__repr__", [](const LabelMap& mp) {
            std::ostringstream os;
            os << "LabelMap(" << mp.width() << "x" << mp.height() << ", "
               << (mp.space() == LabelSpace::fine ? "fine" : "aggregate")
               << ")";
            return os.str();
        });
    m.def("mirrored", py::overload_cast<const LabelMap&>(&mirrored),
          py::arg("map"));
    m.def("aggregated", &aggregated, py::arg("map"));
    m.def("to_valm", &to_valm, py::arg("map"));
    m.def("from_valm", [](const std::string& s) { return from_valm(s); },
          py::arg("text"));
    m.def("save_valm", &save_valm, py::arg("map"), py::arg("file"));
    m.def("load_valm", &load_valm, py::arg("file"));
    m.def("png_bytes",
          [](const LabelMap& mp, int scale) {
              return py::bytes(png_bytes(mp, scale));
          },
          py::arg("map"), py::arg("scale") = 1);
    m.def("save_png", &save_png, py::arg("map"), py::arg("path"),
          py::arg("scale") = 1);
    m.def("label_palette", [] {
        std::vector<std::tuple<int, int, int>> out;
        for (const Rgb& c : label_palette()) out.emplace_back(c.r, c.g, c.b);
        return out;
    });

    m.def("aggregate_of",
          [](int id) { return aggregate_of(static_cast<FineId>(id)); },
          py::arg("fine_id"));
    m.def("mirror_fine",
          [](int id) { return mirror_fine(static_cast<FineId>(id)); },
          py::arg("fine_id"));
    m.def("fine_name",
          [](int id) { return std::string(fine_name(static_cast<FineId>(id))); },
          py::arg("fine_id"));
    m.def("aggregate_name",
          [](int id) {
              return std::string(aggregate_name(static_cast<AggregateId>(id)));
          },
          py::arg("aggregate_id"));
    m.def("component_members", [](ComponentId c) {
        const auto& mem = component_members(c);
        return std::vector<int>(mem.begin(), mem.end());
    });

    py::class_<SceneSpec>(m, "SceneSpec")
        .def(py::init([](CarType car, Orientation orientation,
                         std::optional<ComponentId> occluded) {
                 SceneSpec s;
                 s.car_type = car;
                 s.orientation = orientation;
                 s.occluded_component = occluded;
                 return s;
             }),
             py::arg("car_type") = CarType::sedan,
             py::arg("orientation") = Orientation::left,
             py::arg("occluded_component") = std::nullopt)
        .def_readwrite("car_type", &SceneSpec::car_type)
        .def_readwrite("orientation", &SceneSpec::orientation)
        .def_readwrite("occluded_component", &SceneSpec::occluded_component);
    py::class_<SubregionSpec>(m, "SubregionSpec")
        .def(py::init([](ComponentId component, Granularity granularity) {
                 return SubregionSpec{component, granularity};
             }),
             py::arg("component") = ComponentId::door_window,
             py::arg("granularity") = Granularity::part)
        .def_readwrite("component", &SubregionSpec::component)
        .def_readwrite("granularity", &SubregionSpec::granularity);
    m.def("render_whole_car", &render_whole_car, py::arg("spec"));
    m.def("render_whole_car",
          [](CarType car, Orientation orientation,
             std::optional<ComponentId> occluded) {
              return render_whole_car({car, orientation, occluded});
          },
          py::arg("car_type"), py::arg("orientation") = Orientation::left,
          py::arg("occluded_component") = std::nullopt);
    m.def("extract_subregion", &extract_subregion, py::arg("whole"),
          py::arg("spec"));
    m.def("extract_subregion",
          [](const LabelMap& whole, ComponentId component, Granularity g) {
              return extract_subregion(whole, {component, g});
          },
          py::arg("whole"), py::arg("component"), py::arg("granularity"));
    m.def("infer_facing", &infer_facing, py::arg("whole"));

    py::class_<CarTypePrediction>(m, "CarTypePrediction")
        .def(py::init<>())
        .def_readwrite("scores", &CarTypePrediction::scores)
        .def_static("one_hot", &CarTypePrediction::one_hot, py::arg("car_type"))
        .def_static("uniform", &CarTypePrediction::uniform);
    py::class_<FeatureVector>(m, "FeatureVector")
        .def(py::init<>())
        .def_readwrite("values", &FeatureVector::values)
        .def_property_readonly("part_block",
                               [](const FeatureVector& f) {
                                   const auto b = f.part_block();
                                   return std::vector<double>(b.begin(),
                                                              b.end());
                               })
        .def_property_readonly("type_block", [](const FeatureVector& f) {
            const auto b = f.type_block();
            return std::vector<double>(b.begin(), b.end());
        });
    m.def("extract_features", &extract_features, py::arg("map"),
          py::arg("prediction"));
    m.def("cosine_distance",
          [](const std::vector<double>& u, const std::vector<double>& v) {
              return cosine_distance(u, v);
          },
          py::arg("u"), py::arg("v"));
    py::class_<PcmDecision>(m, "PcmDecision")
        .def_readonly("chosen_index", &PcmDecision::chosen_index)
        .def_readonly("distances", &PcmDecision::distances);
    m.def("solve_pcm",
          [](const std::vector<FeatureVector>& f) { return solve_pcm(seven(f)); },
          py::arg("features"), "features ordered A, B, C, D1..D4");

    py::class_<Condition>(m, "Condition")
        .def(py::init([](bool orientation_same, bool visible, Granularity g) {
                 return Condition{orientation_same, visible, g};
             }),
             py::arg("orientation_same") = true, py::arg("visible") = true,
             py::arg("granularity") = Granularity::part)
        .def_readwrite("orientation_same", &Condition::orientation_same)
        .def_readwrite("visible", &Condition::visible)
        .def_readwrite("granularity", &Condition::granularity)
        .def_property_readonly("cell_index", &Condition::cell_index)
        .def_property_readonly("key", &Condition::key)
        .def(py::self == py::self);
    m.def("condition_from_cell", &condition_from_cell, py::arg("cell_index"));
    m.def("condition_from_key",
          [](const std::string& k) { return condition_from_key(k); },
          py::arg("key"));

    py::class_<AnalogyProblem>(m, "AnalogyProblem")
        .def_readonly("problem_id", &AnalogyProblem::problem_id)
        .def_readonly("condition", &AnalogyProblem::condition)
        .def_readonly("source_car", &AnalogyProblem::source_car)
        .def_readonly("target_car", &AnalogyProblem::target_car)
        .def_readonly("component", &AnalogyProblem::component)
        .def_readonly("a", &AnalogyProblem::a)
        .def_readonly("b", &AnalogyProblem::b)
        .def_readonly("c", &AnalogyProblem::c)
        .def_readonly("options", &AnalogyProblem::options)
        .def_readonly("option_kinds", &AnalogyProblem::option_kinds)
        .def_readonly("option_cars", &AnalogyProblem::option_cars)
        .def_readonly("correct_index", &AnalogyProblem::correct_index);
    py::class_<ProblemSet>(m, "ProblemSet")
        .def_readonly("kind", &ProblemSet::kind)
        .def_readonly("seed", &ProblemSet::seed)
        .def_readonly("problems", &ProblemSet::problems);
    m.def("build_test_set", &build_test_set, py::arg("seed"));
    m.def("build_corpus", &build_corpus, py::arg("n"), py::arg("seed"));
    m.def("corpus_problem", &corpus_problem, py::arg("seed"), py::arg("index"));
    m.def("ablate_two_term", &ablate_two_term, py::arg("problem"));
    m.def("blank_features", &blank_features);

    py::class_<Manifest>(m, "Manifest")
        .def_readonly("kind", &Manifest::kind)
        .def_readonly("seed", &Manifest::seed)
        .def_readonly("count", &Manifest::count)
        .def_readonly("format_version", &Manifest::format_version)
        .def_readonly("content_hash", &Manifest::content_hash);
    m.def("save_problem_set", &save_problem_set, py::arg("set"),
          py::arg("dir"));
    m.def("load_problem_set", &load_problem_set, py::arg("dir"));
    m.def("load_manifest", &load_manifest, py::arg("dir"));
    m.def("content_hash",
          [](const ProblemSet& s) { return "fnv1a64:" + to_hex(content_hash(s)); },
          py::arg("set"));

    py::class_<NoiseProfile>(m, "NoiseProfile")
        .def(py::init<>())
        .def_readwrite("flip_rate_base", &NoiseProfile::flip_rate_base)
        .def_readwrite("boundary_band", &NoiseProfile::boundary_band)
        .def_readwrite("extra_different_orientation",
                       &NoiseProfile::extra_different_orientation)
        .def_readwrite("extra_invisible", &NoiseProfile::extra_invisible)
        .def_readwrite("extra_piece", &NoiseProfile::extra_piece)
        .def_readwrite("cls_accuracy_whole", &NoiseProfile::cls_accuracy_whole)
        .def_readwrite("cls_accuracy_subregion",
                       &NoiseProfile::cls_accuracy_subregion)
        .def_readwrite("seed", &NoiseProfile::seed)
        .def(py::self == py::self)
        .def("to_json", [](const NoiseProfile& p) { return to_json(p).dump(2); })
        .def_static("from_json", [](const std::string& s) {
            return noise_profile_from_json(nlohmann::json::parse(s));
        });
    m.def("effective_flip_rate", &effective_flip_rate, py::arg("profile"),
          py::arg("condition"));
    m.def("corrupt_segmentation",
          [](const LabelMap& map, const NoiseProfile& profile,
             const Condition& cond, std::uint64_t stream_seed) {
              rng::SplitMix64 s(stream_seed);
              return corrupt_segmentation(map, profile, cond, s);
          },
          py::arg("map"), py::arg("profile"), py::arg("condition"),
          py::arg("stream_seed"));
    m.def("corrupt_segmentation",
          [](const LabelMap& map, double flip_rate, int boundary_band,
             std::uint64_t stream_seed) {
              rng::SplitMix64 s(stream_seed);
              return corrupt_segmentation(map, flip_rate, boundary_band, s);
          },
          py::arg("map"), py::arg("flip_rate"), py::arg("boundary_band"),
          py::arg("stream_seed"));
    m.def("simulate_classifier",
          [](CarType truth, ImageKind kind, const NoiseProfile& profile,
             std::uint64_t stream_seed) {
              rng::SplitMix64 s(stream_seed);
              return simulate_classifier(truth, kind, profile, s);
          },
          py::arg("truth"), py::arg("kind"), py::arg("profile"),
          py::arg("stream_seed"));
    m.def("miou", &miou, py::arg("predicted"), py::arg("truth"));
    py::class_<CalibrationResult>(m, "CalibrationResult")
        .def_readonly("profile", &CalibrationResult::profile)
        .def_readonly("achieved", &CalibrationResult::achieved)
        .def_readonly("converged", &CalibrationResult::converged)
        .def_readonly("iterations", &CalibrationResult::iterations);
    m.def("calibrate_noise",
          [](double target, const std::vector<LabelMap>& sample,
             const NoiseProfile& base, int max_iterations, double tolerance) {
              return calibrate_noise(target, sample, base, max_iterations,
                                     tolerance);
          },
          py::arg("target_miou"), py::arg("sample"),
          py::arg("base") = NoiseProfile{}, py::arg("max_iterations") = 30,
          py::arg("tolerance") = 0.01);

    m.def("hamming_distance", &hamming_distance, py::arg("a"), py::arg("b"));
    m.def("solve_shortcut",
          [](const LabelMap& b, const std::vector<LabelMap>& options,
             const FeatureVector& f_b,
             const std::vector<FeatureVector>& f_options,
             ShortcutMetric metric) {
              if (options.size() != 4 || f_options.size() != 4)
                  throw std::invalid_argument("expected 4 options");
              return solve_shortcut(b, options, f_b, f_options, metric);
          },
          py::arg("b"), py::arg("options"), py::arg("f_b"),
          py::arg("f_options"), py::arg("metric") = ShortcutMetric::cosine);
    m.def("solve_random",
          [](std::uint64_t stream_seed) {
              rng::SplitMix64 s(stream_seed);
              return solve_random(s);
          },
          py::arg("stream_seed"));

    py::class_<HumanReference>(m, "HumanReference")
        .def(py::init<>())
        .def_readwrite("cell_accuracy", &HumanReference::cell_accuracy)
        .def_readwrite("overall", &HumanReference::overall)
        .def_readwrite("source_note", &HumanReference::source_note);
    m.def("load_human_reference", &load_human_reference, py::arg("path"));
    m.def("rmsd",
          [](const std::vector<double>& a, const std::vector<double>& b) {
              return rmsd(a, b);
          },
          py::arg("a"), py::arg("b"));
    py::class_<MainEffects>(m, "MainEffects")
        .def_readonly("orientation", &MainEffects::orientation)
        .def_readonly("visibility", &MainEffects::visibility)
        .def_readonly("granularity", &MainEffects::granularity);
    m.def("main_effects",
          [](const std::array<double, kNumConditionCells>& acc) {
              return main_effects(acc);
          },
          py::arg("cell_accuracy"));

    py::class_<ProblemSource>(m, "ProblemSource")
        .def_static("from_set", &ProblemSource::from_set, py::arg("set"))
        .def_static("from_corpus", &ProblemSource::from_corpus,
                    py::arg("count"), py::arg("seed"))
        .def_static("from_dir", &ProblemSource::from_dir, py::arg("dir"))
        .def_property_readonly("kind", &ProblemSource::kind)
        .def_property_readonly("seed", &ProblemSource::seed)
        .def_property_readonly("count", &ProblemSource::count);
    py::class_<CellStats>(m, "CellStats")
        .def_readonly("total", &CellStats::total)
        .def_readonly("correct", &CellStats::correct)
        .def_readonly("responses", &CellStats::responses)
        .def_property_readonly("accuracy", &CellStats::accuracy);
    py::class_<EvaluationReport>(m, "EvaluationReport")
        .def_readonly("solver_id", &EvaluationReport::solver_id)
        .def_readonly("set_kind", &EvaluationReport::set_kind)
        .def_readonly("set_seed", &EvaluationReport::set_seed)
        .def_readonly("set_count", &EvaluationReport::set_count)
        .def_readonly("set_hash", &EvaluationReport::set_hash)
        .def_readonly("noise", &EvaluationReport::noise)
        .def_readonly("solver_seed", &EvaluationReport::solver_seed)
        .def_readonly("overall", &EvaluationReport::overall)
        .def_readonly("cells", &EvaluationReport::cells)
        .def_readonly("effects", &EvaluationReport::effects)
        .def_readonly("rmsd_vs_human", &EvaluationReport::rmsd_vs_human)
        .def_readonly("human_overall", &EvaluationReport::human_overall)
        .def_readonly("notes", &EvaluationReport::notes)
        .def("cell_accuracies", &EvaluationReport::cell_accuracies)
        .def("to_json", [](const EvaluationReport& r) { return to_json(r).dump(2); });
    m.def("evaluate",
          [](ProblemSource& source, SolverKind solver, std::uint64_t solver_seed,
             ShortcutMetric shortcut_metric, std::optional<NoiseProfile> noise,
             std::optional<HumanReference> human) {
              EvaluateOptions opt;
              opt.solver = solver;
              opt.solver_seed = solver_seed;
              opt.shortcut_metric = shortcut_metric;
              opt.noise = noise;
              if (human) opt.human = &*human;
              return evaluate(source, opt);
          },
          py::arg("source"), py::arg("solver") = SolverKind::pcm,
          py::arg("solver_seed") = 0,
          py::arg("shortcut_metric") = ShortcutMetric::cosine,
          py::arg("noise") = std::nullopt, py::arg("human") = std::nullopt);

    m.def("rng_split", &rng::split, py::arg("master"), py::arg("index"));
}
