#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "partva/problem.hpp"

namespace partva {

inline constexpr int kProblemSetFormatVersion = 1;

struct Manifest {
    SetKind kind = SetKind::test128;
    std::uint64_t seed = 0;
    std::uint64_t count = 0;
    int format_version = kProblemSetFormatVersion;
    std::string content_hash;  // "fnv1a64:<16 hex>"
};

// Streaming writer for a problem-set directory:
//   <dir>/manifest.json
//   <dir>/problems.jsonl     one record per problem
//   <dir>/maps/m_<hash>.valm content-addressed label maps
// Maps are deduplicated by content, so directories stay small even for
// large corpora (whole-car renders repeat constantly).
class ProblemSetWriter {
  public:
    ProblemSetWriter(std::filesystem::path dir, SetKind kind, std::uint64_t seed);
    void append(const AnalogyProblem& problem);
    Manifest finalize();

  private:
    std::string store_map(const LabelMap& map);

    std::filesystem::path dir_;
    SetKind kind_;
    std::uint64_t seed_;
    std::uint64_t count_ = 0;
    std::ofstream jsonl_;
    std::uint64_t hash_;
    std::unordered_map<std::uint64_t, std::string> stored_;  // content hash -> ref
    std::vector<std::string> new_texts_;  // maps first stored by the current record
    bool finalized_ = false;
};

Manifest save_problem_set(const ProblemSet& set, const std::filesystem::path& dir);

// Computes the content hash a saved directory would carry, without touching
// the filesystem. Feed problems in order.
class SetHasher {
  public:
    void add(const AnalogyProblem& problem);
    std::uint64_t value() const { return hash_; }

  private:
    std::unordered_map<std::uint64_t, std::string> stored_;
    std::uint64_t hash_ = 0xCBF29CE484222325ULL;
};

std::uint64_t content_hash(const ProblemSet& set);

Manifest load_manifest(const std::filesystem::path& dir);

// Eager load with content-hash verification.
ProblemSet load_problem_set(const std::filesystem::path& dir);

// Sequential streaming reader for large sets.
class ProblemSetReader {
  public:
    explicit ProblemSetReader(std::filesystem::path dir);
    const Manifest& manifest() const { return manifest_; }
    bool done() const { return read_ == manifest_.count; }
    AnalogyProblem next();
    // Verifies the running hash against the manifest; call after reading
    // everything (load_problem_set does this automatically).
    void verify_hash() const;

  private:
    const LabelMap& map_for(const std::string& ref);

    std::filesystem::path dir_;
    Manifest manifest_;
    std::ifstream jsonl_;
    std::uint64_t read_ = 0;
    std::uint64_t hash_;
    std::unordered_map<std::string, LabelMap> map_cache_;
};

}  // namespace partva
