#include "partva/problem_io.hpp"

#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace partva {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::uint64_t kHashSeed = 0xCBF29CE484222325ull;

ordered_json problem_record(const AnalogyProblem& p,
                            const std::string& a_ref, const std::string& b_ref,
                            const std::string& c_ref,
                            const std::array<std::string, 4>& option_refs) {
    ordered_json rec;
    rec["problem_id"] = p.problem_id;
    rec["condition"] = {{"orientation_same", p.condition.orientation_same},
                        {"visible", p.condition.visible},
                        {"granularity", std::string(to_string(p.condition.granularity))}};
    rec["source_car"] = std::string(to_string(p.source_car));
    rec["target_car"] = std::string(to_string(p.target_car));
    rec["component"] = std::string(to_string(p.component));
    rec["correct_index"] = p.correct_index;
    ordered_json kinds = ordered_json::array();
    ordered_json cars = ordered_json::array();
    for (int i = 0; i < 4; ++i) {
        kinds.push_back(std::string(to_string(p.option_kinds[i])));
        cars.push_back(std::string(to_string(p.option_cars[i])));
    }
    rec["option_kinds"] = std::move(kinds);
    rec["option_cars"] = std::move(cars);
    rec["maps"] = {{"a", a_ref},
                   {"b", b_ref},
                   {"c", c_ref},
                   {"options", {option_refs[0], option_refs[1], option_refs[2],
                                option_refs[3]}}};
    return rec;
}

template <typename T>
T get_field(const ordered_json& j, const char* key) {
    if (!j.contains(key))
        throw std::runtime_error(std::string("missing field: ") + key);
    return j.at(key).get<T>();
}

}  // namespace

ProblemSetWriter::ProblemSetWriter(std::filesystem::path dir, SetKind kind,
                                   std::uint64_t seed)
    : dir_(std::move(dir)), kind_(kind), seed_(seed), hash_(kHashSeed) {
    std::filesystem::create_directories(dir_ / "maps");
    jsonl_.open(dir_ / "problems.jsonl", std::ios::binary);
    if (!jsonl_)
        throw std::runtime_error("cannot open for writing: " +
                                 (dir_ / "problems.jsonl").string());
}

std::string ProblemSetWriter::store_map(const LabelMap& map) {
    const std::string text = to_valm(map);
    const std::uint64_t h = fnv1a64(text);
    if (auto it = stored_.find(h); it != stored_.end()) return it->second;
    const std::string ref = "maps/m_" + to_hex(h) + ".valm";
    std::ofstream out(dir_ / ref, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " +
                                 (dir_ / ref).string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write failed: " + (dir_ / ref).string());
    stored_.emplace(h, ref);
    new_texts_.push_back(text);
    return ref;
}

void ProblemSetWriter::append(const AnalogyProblem& p) {
    if (finalized_) throw std::logic_error("writer already finalized");
    new_texts_.clear();
    const std::string a_ref = store_map(p.a);
    const std::string b_ref = store_map(p.b);
    const std::string c_ref = store_map(p.c);
    std::array<std::string, 4> option_refs;
    for (int i = 0; i < 4; ++i) option_refs[i] = store_map(p.options[i]);

    const std::string line =
        problem_record(p, a_ref, b_ref, c_ref, option_refs).dump() + "\n";
    jsonl_.write(line.data(), static_cast<std::streamsize>(line.size()));
    // The record line enters the content hash first, then any map bytes the
    // record referenced for the first time, matching the reader's order.
    hash_ = fnv1a64(line, hash_);
    for (const std::string& text : new_texts_) hash_ = fnv1a64(text, hash_);
    ++count_;
}

Manifest ProblemSetWriter::finalize() {
    if (finalized_) throw std::logic_error("writer already finalized");
    finalized_ = true;
    jsonl_.close();

    Manifest m;
    m.kind = kind_;
    m.seed = seed_;
    m.count = count_;
    m.content_hash = "fnv1a64:" + to_hex(hash_);

    ordered_json j;
    j["format_version"] = m.format_version;
    j["kind"] = std::string(to_string(m.kind));
    j["seed"] = m.seed;
    j["count"] = m.count;
    j["content_hash"] = m.content_hash;
    std::ofstream out(dir_ / "manifest.json", std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " +
                                 (dir_ / "manifest.json").string());
    out << j.dump(2) << "\n";
    return m;
}

Manifest save_problem_set(const ProblemSet& set, const std::filesystem::path& dir) {
    ProblemSetWriter writer(dir, set.kind, set.seed);
    for (const AnalogyProblem& p : set.problems) writer.append(p);
    return writer.finalize();
}

void SetHasher::add(const AnalogyProblem& p) {
    std::vector<std::string> new_texts;
    auto ref_for = [&](const LabelMap& map) {
        const std::string text = to_valm(map);
        const std::uint64_t h = fnv1a64(text);
        if (auto it = stored_.find(h); it != stored_.end()) return it->second;
        const std::string ref = "maps/m_" + to_hex(h) + ".valm";
        stored_.emplace(h, ref);
        new_texts.push_back(text);
        return ref;
    };
    const std::string a_ref = ref_for(p.a);
    const std::string b_ref = ref_for(p.b);
    const std::string c_ref = ref_for(p.c);
    std::array<std::string, 4> option_refs;
    for (int i = 0; i < 4; ++i) option_refs[i] = ref_for(p.options[i]);
    const std::string line =
        problem_record(p, a_ref, b_ref, c_ref, option_refs).dump() + "\n";
    hash_ = fnv1a64(line, hash_);
    for (const std::string& text : new_texts) hash_ = fnv1a64(text, hash_);
}

std::uint64_t content_hash(const ProblemSet& set) {
    SetHasher hasher;
    for (const AnalogyProblem& p : set.problems) hasher.add(p);
    return hasher.value();
}

Manifest load_manifest(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json", std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open: " + (dir / "manifest.json").string());
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("malformed manifest.json: " +
                                 std::string(e.what()));
    }
    Manifest m;
    m.format_version = get_field<int>(j, "format_version");
    if (m.format_version != kProblemSetFormatVersion)
        throw std::runtime_error("unsupported problem set format version " +
                                 std::to_string(m.format_version));
    m.kind = set_kind_from_string(get_field<std::string>(j, "kind"));
    m.seed = get_field<std::uint64_t>(j, "seed");
    m.count = get_field<std::uint64_t>(j, "count");
    m.content_hash = get_field<std::string>(j, "content_hash");
    return m;
}

ProblemSetReader::ProblemSetReader(std::filesystem::path dir)
    : dir_(std::move(dir)), manifest_(load_manifest(dir_)), hash_(kHashSeed) {
    jsonl_.open(dir_ / "problems.jsonl", std::ios::binary);
    if (!jsonl_)
        throw std::runtime_error("cannot open: " +
                                 (dir_ / "problems.jsonl").string());
}

const LabelMap& ProblemSetReader::map_for(const std::string& ref) {
    if (auto it = map_cache_.find(ref); it != map_cache_.end()) return it->second;
    if (ref.find("..") != std::string::npos)
        throw std::runtime_error("map reference escapes the set directory: " + ref);
    std::ifstream in(dir_ / ref, std::ios::binary);
    if (!in) throw std::runtime_error("dangling map reference: " + ref);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    hash_ = fnv1a64(text, hash_);
    auto [it, inserted] = map_cache_.emplace(ref, from_valm(text));
    return it->second;
}

AnalogyProblem ProblemSetReader::next() {
    if (done()) throw std::logic_error("problem set exhausted");
    std::string line;
    if (!std::getline(jsonl_, line))
        throw std::runtime_error("problems.jsonl truncated");

    ordered_json rec;
    try {
        rec = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("malformed problem record: " +
                                 std::string(e.what()));
    }

    AnalogyProblem p;
    p.problem_id = get_field<std::string>(rec, "problem_id");
    const ordered_json cond = get_field<ordered_json>(rec, "condition");
    p.condition.orientation_same = get_field<bool>(cond, "orientation_same");
    p.condition.visible = get_field<bool>(cond, "visible");
    const auto gran =
        granularity_from_string(get_field<std::string>(cond, "granularity"));
    if (!gran) throw std::runtime_error("unknown granularity in record");
    p.condition.granularity = *gran;

    const auto source = car_type_from_string(get_field<std::string>(rec, "source_car"));
    const auto target = car_type_from_string(get_field<std::string>(rec, "target_car"));
    if (!source || !target) throw std::runtime_error("unknown car type in record");
    p.source_car = *source;
    p.target_car = *target;
    const auto comp = component_from_string(get_field<std::string>(rec, "component"));
    if (!comp) throw std::runtime_error("unknown component in record");
    p.component = *comp;
    p.correct_index = get_field<int>(rec, "correct_index");
    if (p.correct_index < 0 || p.correct_index > 3)
        throw std::runtime_error("correct_index out of range in record");

    const ordered_json kinds = get_field<ordered_json>(rec, "option_kinds");
    const ordered_json cars = get_field<ordered_json>(rec, "option_cars");
    if (kinds.size() != 4 || cars.size() != 4)
        throw std::runtime_error("option arrays must have 4 entries");
    for (int i = 0; i < 4; ++i) {
        p.option_kinds[i] = option_kind_from_string(kinds[i].get<std::string>());
        const auto car = car_type_from_string(cars[i].get<std::string>());
        if (!car) throw std::runtime_error("unknown option car in record");
        p.option_cars[i] = *car;
    }
    if (p.option_kinds[p.correct_index] != OptionKind::correct)
        throw std::runtime_error("correct_index disagrees with option_kinds");

    // The record bytes enter the hash before the maps that the record pulls
    // in for the first time, matching the writer's order.
    hash_ = fnv1a64(line + "\n", hash_);

    const ordered_json maps = get_field<ordered_json>(rec, "maps");
    p.a = map_for(get_field<std::string>(maps, "a"));
    p.b = map_for(get_field<std::string>(maps, "b"));
    p.c = map_for(get_field<std::string>(maps, "c"));
    const ordered_json option_refs = get_field<ordered_json>(maps, "options");
    if (option_refs.size() != 4)
        throw std::runtime_error("maps.options must have 4 entries");
    for (int i = 0; i < 4; ++i)
        p.options[i] = map_for(option_refs[i].get<std::string>());

    ++read_;
    return p;
}

void ProblemSetReader::verify_hash() const {
    const std::string computed = "fnv1a64:" + to_hex(hash_);
    if (computed != manifest_.content_hash)
        throw std::runtime_error("content hash mismatch: manifest says " +
                                 manifest_.content_hash + ", computed " +
                                 computed);
}

ProblemSet load_problem_set(const std::filesystem::path& dir) {
    ProblemSetReader reader(dir);
    ProblemSet set;
    set.kind = reader.manifest().kind;
    set.seed = reader.manifest().seed;
    set.problems.reserve(reader.manifest().count);
    while (!reader.done()) set.problems.push_back(reader.next());
    reader.verify_hash();
    return set;
}

}  // namespace partva
