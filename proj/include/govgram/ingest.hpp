#pragma once

#include <cstdint>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace govgram {

/// Named, case-insensitive filename patterns. The first matching pattern
/// names the file's discovery pattern.
class PatternSet {
 public:
  /// governance-md (GOVERNANCE.md), governance-variant
  /// (governance[._-]*.{md,markdown,rst,txt}) and governance-bare.
  static PatternSet defaults();

  void add(std::string name, const std::string& regex);
  /// Appends `name<TAB>regex` lines; '#' starts a comment.
  void load_file(const std::string& path);

  std::optional<std::string> match(std::string_view filename) const;
  std::vector<std::string> names() const;

 private:
  std::vector<std::pair<std::string, std::regex>> patterns_;
};

struct GovernanceFileRef {
  std::string repo_id;
  std::string repo_root;
  std::string path;  // root-level file name
  std::string filename_pattern;
};

struct HistoryEntry {
  std::string commit;
  std::int64_t commit_time = 0;  // seconds since epoch, UTC
  std::string text;
  bool valid = false;  // non-empty after markup stripping, at least one sentence
};

using FileHistory = std::vector<HistoryEntry>;

struct PathHistory {
  std::string path;
  FileHistory entries;
};

struct SnapshotVersion {
  std::string commit;
  std::int64_t time = 0;
  std::string text;
};

struct SnapshotPair {
  std::string repo_id;
  SnapshotVersion initial;
  SnapshotVersion latest;
  std::int64_t gap_days = 0;
  bool across_day = false;
  std::size_t n_governance_commits = 0;
};

enum class PairStatus { paired, single_snapshot, no_valid_snapshot };

std::string_view to_string(PairStatus s) noexcept;
std::optional<PairStatus> parse_pair_status(std::string_view s) noexcept;

/// One corpus line: a pair, or an exclusion record. Single-snapshot records
/// keep their one snapshot in `initial` for descriptive statistics.
struct CorpusRecord {
  std::string repo_id;
  PairStatus status = PairStatus::no_valid_snapshot;
  std::optional<SnapshotVersion> initial;
  std::optional<SnapshotVersion> latest;
  std::int64_t gap_days = 0;
  bool across_day = false;
  std::size_t n_commits = 0;

  std::optional<SnapshotPair> pair() const;
};

/// Throws IngestError naming the repository when it is not a readable git
/// working tree or bare repository.
std::vector<GovernanceFileRef> discover_governance_files(const std::string& repo_root,
                                                         const std::string& repo_id,
                                                         const PatternSet& patterns);

/// Commits that modified the file, oldest first. Unreadable objects are
/// skipped with a message appended to `warnings`.
FileHistory recover_history(const GovernanceFileRef& ref,
                            std::vector<std::string>* warnings = nullptr);

/// Whole UTC calendar days between two instants.
std::int64_t utc_day_gap(std::int64_t earlier, std::int64_t later) noexcept;

CorpusRecord pair_snapshots(const std::string& repo_id, const FileHistory& history);

/// Pairs the composite view of several governance files: one state per
/// commit touching any of them, each file at its latest version so far.
CorpusRecord pair_snapshots(const std::string& repo_id, std::span<const PathHistory> files);

/// Merges per-file histories into one composite history.
FileHistory composite_history(std::span<const PathHistory> files);

/// Concatenates files in byte-wise path order separated by a blank line,
/// dropping paragraphs that repeat an earlier one after whitespace collapse.
std::string compose_view(std::vector<std::pair<std::string, std::string>> files);

/// discover + recover + pair for one repository.
CorpusRecord ingest_repository(const std::string& repo_root, const std::string& repo_id,
                               const PatternSet& patterns,
                               std::vector<std::string>* warnings = nullptr);

std::string format_rfc3339(std::int64_t unix_seconds);
/// Accepts "YYYY-MM-DDTHH:MM:SS[.frac](Z|±HH:MM)". Throws FormatError.
std::int64_t parse_rfc3339(std::string_view text);

}  // namespace govgram
