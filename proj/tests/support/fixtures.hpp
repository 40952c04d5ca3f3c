#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "govgram/ingest.hpp"

namespace govgram::testing {

struct PlantedSpec {
  std::size_t n_repos = 250;
  std::size_t action_plants = 150;  // repositories gaining one action category
  std::size_t role_plants = 70;     // repositories going from 4 to 5 uniform roles
  std::uint64_t seed = 2024;
};

struct PlantedCorpus {
  std::vector<CorpusRecord> records;
  double planted_delta_k_actions = 0.0;  // exact mean over repositories
  double planted_delta_h_roles = 0.0;
  std::size_t n_across_day = 0;
};

/// Synthetic paired corpus with known per-repository changes. Every
/// role-bearing sentence uses a lexicon surface and an unambiguous verb, and
/// action plants are role-less passive sentences, so roles and actions can
/// be planted independently.
PlantedCorpus make_planted_corpus(const PlantedSpec& spec);

/// Corpus JSONL text for a record list.
std::string corpus_jsonl(const std::vector<CorpusRecord>& records);

/// Temporary directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::string& path() const { return path_; }
  std::string file(const std::string& name) const { return path_ + "/" + name; }

 private:
  std::string path_;
};

/// Scratch git repository with deterministic commit times.
class GitRepo {
 public:
  explicit GitRepo(const std::string& path);

  void write(const std::string& relative, const std::string& content) const;
  void remove(const std::string& relative) const;
  /// Stages everything and commits with the given committer time (UTC seconds).
  std::string commit(std::int64_t time, const std::string& message = "update") const;

  const std::string& path() const { return path_; }

 private:
  void git(const std::vector<std::string>& args) const;
  std::string path_;
};

}  // namespace govgram::testing
