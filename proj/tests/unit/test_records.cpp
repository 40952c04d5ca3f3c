#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "govgram/error.hpp"
#include "govgram/records.hpp"
#include "fixtures.hpp"

using namespace govgram;
using govgram::testing::TempDir;

namespace {

CorpusRecord paired_record() {
  CorpusRecord r;
  r.repo_id = "acme/widget";
  r.status = PairStatus::paired;
  r.initial = SnapshotVersion{"abc", 1600000000, "# Gov\n\nMaintainers \"must\" review.\n"};
  r.latest = SnapshotVersion{"def", 1600864000, "Caf\xc3\xa9 rules\ttabs\n"};
  r.gap_days = 10;
  r.across_day = true;
  r.n_commits = 3;
  return r;
}

LabeledStatement labeled_statement() {
  LabeledStatement l;
  auto& s = l.statement;
  s.ref = {"acme/widget", Snapshot::latest, 4, 1};
  s.sentence_text = "The chairs must not publish drafts.";
  s.role_text = "chairs";
  s.role_span = Span{4, 10};
  s.deontic = DeonticType{Modal::must, true};
  s.deontic_span = Span{11, 19};
  s.action_lemma = "publish";
  s.action_span = Span{20, 27};
  s.object_text = "drafts";
  s.object_span = Span{28, 34};
  l.role_category = RoleCategory::chairs;
  l.action_category = ActionCategory::information;
  l.deontic_strength = DeonticStrength::obligatory;
  l.deontic_polarity = DeonticPolarity::restricting;
  return l;
}

}  // namespace

TEST_CASE("corpus record round trip") {
  const auto r = paired_record();
  const auto line = corpus_record_to_json(r);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(line.find("\"time\":\"2020-09-13T12:26:40Z\"") != std::string::npos);
  const auto back = corpus_record_from_json(line);
  CHECK(back.repo_id == r.repo_id);
  CHECK(back.status == PairStatus::paired);
  CHECK(back.initial->text == r.initial->text);
  CHECK(back.latest->text == r.latest->text);
  CHECK(back.latest->time == r.latest->time);
  CHECK(back.gap_days == 10);
  CHECK(back.across_day);
  CHECK(back.n_commits == 3);
  CHECK(corpus_record_to_json(back) == line);
}

TEST_CASE("exclusion records carry null snapshots") {
  CorpusRecord r;
  r.repo_id = "x/y";
  r.status = PairStatus::no_valid_snapshot;
  const auto line = corpus_record_to_json(r);
  CHECK(line.find("\"initial\":null") != std::string::npos);
  const auto back = corpus_record_from_json(line);
  CHECK_FALSE(back.initial);
  CHECK_FALSE(back.pair());
}

TEST_CASE("malformed corpus records are rejected") {
  CHECK_THROWS_AS(corpus_record_from_json("{not json"), FormatError);
  CHECK_THROWS_AS(corpus_record_from_json(R"({"repo_id":"a","status":"paired","initial":null,"latest":null})"),
                  FormatError);
  auto r = paired_record();
  std::swap(r.initial, r.latest);
  CHECK_THROWS_AS(corpus_record_from_json(corpus_record_to_json(r)), FormatError);
}

TEST_CASE("sentence record round trip") {
  SnapshotSentences s;
  s.repo_id = "acme/widget";
  s.snapshot = Snapshot::latest;
  s.across_day = true;
  s.section_count = 2;
  Sentence a;
  a.text = "Reviewers can approve.";
  a.block_index = 3;
  a.char_span = {10, 27};
  a.substitutions.push_back({{0, 9}, "They", "Reviewers"});
  s.sentences.push_back(a);
  const auto back = sentences_record_from_json(sentences_record_to_json(s));
  CHECK(back.repo_id == s.repo_id);
  CHECK(back.snapshot == Snapshot::latest);
  CHECK(back.across_day);
  CHECK(back.section_count == 2);
  REQUIRE(back.sentences.size() == 1);
  CHECK(back.sentences[0].char_span == Span{10, 27});
  CHECK(back.sentences[0].substitutions[0].antecedent == "Reviewers");
  CHECK(sentences_record_to_json(back) == sentences_record_to_json(s));
}

TEST_CASE("statement and labeled record round trips") {
  const auto l = labeled_statement();
  const StatementRecord st{l.statement, true};
  const auto st_back = statement_record_from_json(statement_record_to_json(st));
  CHECK(st_back.statement.ref == l.statement.ref);
  CHECK(st_back.statement.deontic == l.statement.deontic);
  CHECK(st_back.statement.object_span == l.statement.object_span);
  CHECK(st_back.across_day);
  CHECK(statement_record_to_json(st_back) == statement_record_to_json(st));

  const LabeledRecord lr{l, false};
  const auto line = labeled_record_to_json(lr);
  CHECK(line.find("\"deontic_polarity\":\"restricting\"") != std::string::npos);
  const auto lb = labeled_record_from_json(line);
  CHECK(lb.labeled.role_category == RoleCategory::chairs);
  CHECK(lb.labeled.action_category == ActionCategory::information);
  CHECK(lb.labeled.deontic_strength == DeonticStrength::obligatory);
  CHECK(labeled_record_to_json(lb) == line);
}

TEST_CASE("absent components are null") {
  LabeledRecord lr;
  lr.labeled.statement.ref = {"r", Snapshot::initial, 0, 0};
  lr.labeled.statement.sentence_text = "Hello.";
  const auto line = labeled_record_to_json(lr);
  CHECK(line.find("\"deontic\":null") != std::string::npos);
  const auto back = labeled_record_from_json(line);
  CHECK_FALSE(back.labeled.statement.role_text);
  CHECK_FALSE(back.labeled.role_category);
}

TEST_CASE("reading files names the record on error") {
  TempDir tmp;
  const auto path = tmp.file("c.jsonl");
  write_file(path, corpus_record_to_json(paired_record()) + "\n\n{oops}\n");
  try {
    read_corpus(path);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find(path) != std::string::npos);
  }
  write_file(path, corpus_record_to_json(paired_record()) + "\n\n");
  CHECK(read_corpus(path).size() == 1);
}

TEST_CASE("group pairs orders repos and statements") {
  std::vector<LabeledRecord> recs;
  const auto add = [&](const char* repo, Snapshot snap, std::size_t sentence, std::size_t clause,
                       bool across) {
    LabeledRecord r;
    r.labeled.statement.ref = {repo, snap, sentence, clause};
    r.across_day = across;
    recs.push_back(r);
  };
  add("z", Snapshot::latest, 2, 0, true);
  add("z", Snapshot::latest, 1, 1, true);
  add("z", Snapshot::latest, 1, 0, true);
  add("z", Snapshot::initial, 0, 0, true);
  add("a", Snapshot::initial, 0, 0, false);
  const auto pairs = group_pairs(recs);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].repo_id == "a");
  CHECK_FALSE(pairs[0].across_day);
  CHECK(pairs[1].across_day);
  REQUIRE(pairs[1].latest.size() == 3);
  CHECK(pairs[1].latest[0].statement.ref.clause == 0);
  CHECK(pairs[1].latest[1].statement.ref.clause == 1);
  CHECK(pairs[1].latest[2].statement.ref.sentence == 2);
  const auto across = group_pairs(recs, true);
  REQUIRE(across.size() == 1);
  CHECK(across[0].repo_id == "z");
}
