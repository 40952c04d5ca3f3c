#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "govgram/error.hpp"
#include "govgram/ingest.hpp"
#include "govgram/text_util.hpp"
#include "fixtures.hpp"

using namespace govgram;
using govgram::testing::GitRepo;
using govgram::testing::TempDir;

namespace {

constexpr std::int64_t kDay = 86400;
constexpr std::int64_t kT0 = 1600000000;  // 2020-09-13T12:26:40Z

const char* kDocA = "# Governance\n\nMaintainers must review changes.\n";
const char* kDocB = "# Governance\n\nMaintainers must review changes.\n\nThe chairs may vote.\n";

std::vector<std::string> paths(const std::vector<GovernanceFileRef>& refs) {
  std::vector<std::string> out;
  for (const auto& r : refs) out.push_back(r.path);
  return out;
}

}  // namespace

TEST_CASE("default patterns") {
  const auto p = PatternSet::defaults();
  CHECK(p.match("GOVERNANCE.md") == "governance-md");
  CHECK(p.match("governance.md") == "governance-md");
  CHECK(p.match("Governance.rst") == "governance-variant");
  CHECK(p.match("GOVERNANCE-policy.markdown") == "governance-variant");
  CHECK(p.match("governance_v2.txt") == "governance-variant");
  CHECK(p.match("GOVERNANCE") == "governance-bare");
  CHECK_FALSE(p.match("governance.py"));
  CHECK_FALSE(p.match("README.md"));
  CHECK_FALSE(p.match("my-governance.md"));
}

TEST_CASE("custom pattern file") {
  TempDir tmp;
  write_file(tmp.file("p.tsv"), "# extra\ncharter\t^charter\\.md$\n");
  auto p = PatternSet::defaults();
  p.load_file(tmp.file("p.tsv"));
  CHECK(p.match("CHARTER.md") == "charter");
  CHECK(p.names().back() == "charter");
}

TEST_CASE("discovery is root-only, byte-ordered and names the pattern") {
  TempDir tmp;
  GitRepo repo(tmp.path() + "/r");
  repo.write("governance.md", kDocA);
  repo.write("GOVERNANCE.rst", kDocA);
  repo.write("docs/GOVERNANCE.md", kDocA);
  repo.write("README.md", "hi\n");
  repo.commit(kT0);
  const auto refs = discover_governance_files(repo.path(), "acme/r", PatternSet::defaults());
  CHECK(paths(refs) == std::vector<std::string>{"GOVERNANCE.rst", "governance.md"});
  CHECK(refs[0].filename_pattern == "governance-variant");
  CHECK(refs[1].filename_pattern == "governance-md");
  CHECK(refs[0].repo_id == "acme/r");
}

TEST_CASE("non-root governance files are ignored") {
  TempDir tmp;
  GitRepo repo(tmp.path() + "/r");
  repo.write("src/GOVERNANCE.md", kDocA);
  repo.commit(kT0);
  CHECK(discover_governance_files(repo.path(), "r", PatternSet::defaults()).empty());
}

TEST_CASE("an untracked file has no history") {
  TempDir tmp;
  GitRepo repo(tmp.path() + "/r");
  repo.write("README.md", "hi\n");
  repo.commit(kT0);
  repo.write("GOVERNANCE.md", kDocA);
  const auto refs = discover_governance_files(repo.path(), "r", PatternSet::defaults());
  REQUIRE(refs.size() == 1);
  CHECK(recover_history(refs[0]).empty());
}

TEST_CASE("discovery fails loudly on a non-repository") {
  TempDir tmp;
  try {
    discover_governance_files(tmp.path(), "ghost/repo", PatternSet::defaults());
    FAIL("expected IngestError");
  } catch (const IngestError& e) {
    CHECK(std::string(e.what()).find("ghost/repo") != std::string::npos);
  }
}

TEST_CASE("history is oldest first with validity flags") {
  TempDir tmp;
  GitRepo repo(tmp.path() + "/r");
  repo.write("GOVERNANCE.md", "");
  const auto c0 = repo.commit(kT0);
  repo.write("GOVERNANCE.md", kDocA);
  const auto c1 = repo.commit(kT0 + 3 * kDay);
  repo.write("other.txt", "x");
  repo.commit(kT0 + 4 * kDay);
  repo.write("GOVERNANCE.md", kDocB);
  const auto c2 = repo.commit(kT0 + 9 * kDay);
  const auto refs = discover_governance_files(repo.path(), "r", PatternSet::defaults());
  REQUIRE(refs.size() == 1);
  const auto h = recover_history(refs[0]);
  REQUIRE(h.size() == 3);
  CHECK(h[0].commit == c0);
  CHECK_FALSE(h[0].valid);
  CHECK(h[1].commit == c1);
  CHECK(h[1].valid);
  CHECK(h[1].text == kDocA);
  CHECK(h[2].commit == c2);
  CHECK(h[2].commit_time == kT0 + 9 * kDay);
}

TEST_CASE("day gap counts UTC calendar boundaries") {
  const std::int64_t midnight = 1600041600;  // 2020-09-14T00:00:00Z
  CHECK(utc_day_gap(midnight - 1, midnight) == 1);
  CHECK(utc_day_gap(midnight, midnight + kDay - 1) == 0);
  CHECK(utc_day_gap(midnight, midnight + 10 * kDay) == 10);
}

TEST_CASE("pairing uses the earliest and latest valid versions") {
  FileHistory h = {
      {"c0", kT0, "", false},
      {"c1", kT0 + kDay, kDocA, true},
      {"c2", kT0 + 2 * kDay, "<!-- -->", false},
      {"c3", kT0 + 5 * kDay, kDocB, true},
  };
  const auto r = pair_snapshots("r", h);
  CHECK(r.status == PairStatus::paired);
  CHECK(r.initial->commit == "c1");
  CHECK(r.latest->commit == "c3");
  CHECK(r.gap_days == 4);
  CHECK(r.across_day);
  CHECK(r.n_commits == 4);
  const auto p = r.pair();
  REQUIRE(p);
  CHECK(p->latest.text == kDocB);
}

TEST_CASE("observation window endpoints pair across days") {
  const auto t0 = parse_rfc3339("2014-03-26T09:00:00Z");
  const auto t1 = parse_rfc3339("2022-05-18T17:00:00Z");
  const auto r = pair_snapshots("r", FileHistory{{"c1", t0, kDocA, true}, {"c2", t1, kDocB, true}});
  CHECK(r.across_day);
  CHECK(r.gap_days == 2975);
  CHECK(pair_snapshots("r", FileHistory{{"c1", t0, kDocA, true}, {"c2", t1, kDocB, true}})
            .latest->commit == r.latest->commit);
}

TEST_CASE("same-day pairs are kept but flagged") {
  FileHistory h = {{"c1", kT0, kDocA, true}, {"c2", kT0 + 60, kDocB, true}};
  const auto r = pair_snapshots("r", h);
  CHECK(r.status == PairStatus::paired);
  CHECK(r.gap_days == 0);
  CHECK_FALSE(r.across_day);
}

TEST_CASE("single and missing snapshots are exclusions") {
  const auto one = pair_snapshots("r", FileHistory{{"c1", kT0, kDocA, true}, {"c2", kT0 + kDay, "", false}});
  CHECK(one.status == PairStatus::single_snapshot);
  CHECK(one.initial->commit == "c1");
  CHECK_FALSE(one.latest);
  CHECK_FALSE(one.pair());
  const auto none = pair_snapshots("r", FileHistory{{"c1", kT0, "", false}});
  CHECK(none.status == PairStatus::no_valid_snapshot);
  CHECK_FALSE(none.initial);
  CHECK(pair_snapshots("r", FileHistory{}).status == PairStatus::no_valid_snapshot);
}

TEST_CASE("compose view") {
  CHECK(compose_view({{"GOVERNANCE.md", "only\n"}}) == "only\n");
  const auto v = compose_view({{"b.md", "Shared  rule.\n\nB only."}, {"a.md", "Shared rule.\n\nA only."}});
  CHECK(v == "Shared rule.\n\nA only.\n\nB only.");
  const auto order = compose_view({{"a.md", "lower"}, {"B.md", "upper"}});
  CHECK(order == "upper\n\nlower");
  const std::string license = "Licensed under the Apache License.";
  const auto dedup = compose_view({{"GOVERNANCE.md", "Rules.\n\n" + license}, {"governance.rst", license + "\n\nMore rules."}});
  CHECK(dedup == "Rules.\n\n" + license + "\n\nMore rules.");
  CHECK(compose_view({}).empty());
}

TEST_CASE("composite history advances each file independently") {
  std::vector<PathHistory> files = {
      {"GOVERNANCE.md", {{"c1", kT0, kDocA, true}, {"c3", kT0 + 2 * kDay, kDocB, true}}},
      {"governance.rst", {{"c2", kT0 + kDay, "Sponsors may fund travel.", true}}},
  };
  const auto h = composite_history(files);
  REQUIRE(h.size() == 3);
  CHECK(h[0].text == kDocA);
  CHECK(h[1].text.find("Sponsors may fund travel.") != std::string::npos);
  CHECK(h[2].text.find("The chairs may vote.") != std::string::npos);
  CHECK(h[2].text.find("Sponsors may fund travel.") != std::string::npos);
  const auto r = pair_snapshots("r", files);
  CHECK(r.status == PairStatus::paired);
  CHECK(r.initial->commit == "c1");
  CHECK(r.latest->commit == "c3");
}

TEST_CASE("end to end ingest of a scratch repository") {
  TempDir tmp;
  GitRepo repo(tmp.path() + "/r");
  repo.write("GOVERNANCE.md", kDocA);
  const auto c1 = repo.commit(kT0);
  repo.write("GOVERNANCE.md", kDocB);
  const auto c2 = repo.commit(kT0 + 40 * kDay);
  std::vector<std::string> warnings;
  const auto r = ingest_repository(repo.path(), "acme/r", PatternSet::defaults(), &warnings);
  CHECK(warnings.empty());
  CHECK(r.status == PairStatus::paired);
  CHECK(r.initial->commit == c1);
  CHECK(r.latest->commit == c2);
  CHECK(r.gap_days == 40);
  CHECK(r.n_commits == 2);
}

TEST_CASE("repository without governance files") {
  TempDir tmp;
  GitRepo repo(tmp.path() + "/r");
  repo.write("README.md", "hi\n");
  repo.commit(kT0);
  const auto r = ingest_repository(repo.path(), "acme/r", PatternSet::defaults());
  CHECK(r.status == PairStatus::no_valid_snapshot);
}

TEST_CASE("RFC 3339 timestamps") {
  CHECK(format_rfc3339(kT0) == "2020-09-13T12:26:40Z");
  CHECK(format_rfc3339(0) == "1970-01-01T00:00:00Z");
  CHECK(parse_rfc3339("2020-09-13T12:26:40Z") == kT0);
  CHECK(parse_rfc3339("2020-09-13T14:26:40+02:00") == kT0);
  CHECK(parse_rfc3339("2020-09-13T12:26:40.750Z") == kT0);
  CHECK_THROWS_AS(parse_rfc3339("2020-09-13 12:26:40"), FormatError);
  CHECK_THROWS_AS(parse_rfc3339("yesterday"), FormatError);
  CHECK(parse_rfc3339(format_rfc3339(kT0 + 12345)) == kT0 + 12345);
}

TEST_CASE("pair status names") {
  CHECK(to_string(PairStatus::single_snapshot) == "single-snapshot");
  CHECK(parse_pair_status("paired") == PairStatus::paired);
  CHECK_FALSE(parse_pair_status("odd"));
}
