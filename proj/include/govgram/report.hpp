#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "govgram/inference.hpp"
#include "govgram/metrics.hpp"
#include "govgram/records.hpp"
#include "govgram/taxonomy.hpp"

namespace govgram {

struct RunConfig {
  std::uint64_t seed = 17;
  std::size_t B = 10000;
  double alpha = 0.05;
  std::size_t tau = 2;
  std::size_t rarefaction_draws = 200;
  std::size_t rarefaction_cap = 100;
  bool across_day_only = false;
  std::string lexicon_dir;  // empty: lexicons shipped with the source tree
  std::size_t min_labeled = 5;
  bool normalize_entropy = false;
  unsigned threads = 1;  // affects speed only, never output

  /// Throws FormatError when a threshold is not positive or alpha is outside (0, 1).
  void validate() const;
  MetricsConfig metrics() const;
  BootstrapConfig bootstrap() const;
};

/// Flat `key = value` lines named after the RunConfig fields. '#' starts a
/// comment; values may be double-quoted. Unknown keys are errors.
RunConfig parse_run_config(std::string_view text);
/// Relative lexicon_dir values resolve against the file's directory.
RunConfig load_run_config(const std::string& path);

TaxonomyLexicons load_lexicons(const std::string& dir);

// Stage functions. Inputs are processed in repo id order, so outputs do not
// depend on input order or on the worker count.

/// Normalizes both snapshots of every paired record.
std::vector<SnapshotSentences> normalize_corpus(std::span<const CorpusRecord> corpus,
                                                const TaxonomyLexicons& lexicons,
                                                unsigned threads = 1);

std::vector<StatementRecord> parse_snapshots(std::span<const SnapshotSentences> snapshots,
                                             const TaxonomyLexicons& lexicons,
                                             unsigned threads = 1);

std::vector<LabeledRecord> label_statements(std::span<const StatementRecord> statements,
                                            const TaxonomyLexicons& lexicons);

struct InferenceTables {
  std::vector<CountSummary> counts;
  std::vector<EntropySummary> entropy;
  std::map<Feature, std::vector<ShareDelta>> shares;
};

InferenceTables run_inference(std::span<const RepoMetrics> metrics,
                              std::span<const LabeledPair> pairs, const BootstrapConfig& config);

/// Writes summary_counts.csv, summary_entropy.csv, share_deltas_<feature>.csv
/// and summary.txt. Returns the file names written.
std::vector<std::string> write_inference(const InferenceTables& tables, const std::string& out_dir);

/// Pooled mention shares per snapshot (category, initial_pct, latest_pct).
/// Header only when the feature has no labeled statement.
std::string format_share_table(std::span<const LabeledPair> pairs, Feature feature);
/// Modal groups can_may, must_will and should; could and would are left out.
std::string format_modal_share_table(std::span<const LabeledPair> pairs);
/// repo_id, snapshot, K for repositories eligible for the count estimands.
std::string format_violin_table(std::span<const RepoMetrics> metrics, Feature feature);

/// Writes role_shares.csv, action_shares.csv, deontic_shares.csv,
/// deontic_binary_shares.csv and violin_<feature>.csv. Returns the names written.
std::vector<std::string> emit_figure_data(std::span<const LabeledPair> pairs,
                                          std::span<const RepoMetrics> metrics,
                                          const std::string& out_dir);

struct PipelineResult {
  std::map<std::string, std::size_t> counts;
  std::vector<std::string> outputs;  // file names relative to the output directory
};

/// normalize -> parse -> label -> metrics -> infer -> emit, then manifest.json.
/// Stage failures are raised as StageError.
PipelineResult run_pipeline(const RunConfig& config, const std::string& corpus_path,
                            const std::string& out_dir);

}  // namespace govgram
