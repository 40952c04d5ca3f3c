#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "govgram/ingest.hpp"
#include "govgram/labeling.hpp"
#include "govgram/metrics.hpp"
#include "govgram/normalize.hpp"

// JSON Lines encodings of the pipeline's intermediate records. Every line is
// one compact JSON object with keys in a fixed order.

namespace govgram {

std::string corpus_record_to_json(const CorpusRecord& record);
CorpusRecord corpus_record_from_json(std::string_view line);

/// One normalized snapshot with the pair's across-day flag carried along.
struct SnapshotSentences {
  std::string repo_id;
  Snapshot snapshot = Snapshot::initial;
  bool across_day = false;
  std::size_t section_count = 0;
  std::vector<Sentence> sentences;
};

std::string sentences_record_to_json(const SnapshotSentences& record);
SnapshotSentences sentences_record_from_json(std::string_view line);

/// A parsed statement plus the pair's across-day flag.
struct StatementRecord {
  InstitutionalStatement statement;
  bool across_day = false;
};

std::string statement_record_to_json(const StatementRecord& record);
StatementRecord statement_record_from_json(std::string_view line);

struct LabeledRecord {
  LabeledStatement labeled;
  bool across_day = false;
};

std::string labeled_record_to_json(const LabeledRecord& record);
LabeledRecord labeled_record_from_json(std::string_view line);

/// Non-blank lines of a JSON Lines file.
std::vector<std::string> read_jsonl_lines(const std::string& path);

std::vector<CorpusRecord> read_corpus(const std::string& path);
std::vector<SnapshotSentences> read_sentences(const std::string& path);
std::vector<StatementRecord> read_statements(const std::string& path);
std::vector<LabeledRecord> read_labeled(const std::string& path);

/// Groups labeled records into per-repository pairs ordered by repo id. Within
/// a snapshot, statements keep sentence and clause order.
std::vector<LabeledPair> group_pairs(std::vector<LabeledRecord> records,
                                     bool across_day_only = false);

}  // namespace govgram
