#include "govgram/ingest.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <unordered_set>

#include "govgram/error.hpp"
#include "govgram/normalize.hpp"
#include "govgram/process.hpp"
#include "govgram/text_util.hpp"

namespace govgram {

namespace fs = std::filesystem;

std::string_view to_string(PairStatus s) noexcept {
  switch (s) {
    case PairStatus::paired:
      return "paired";
    case PairStatus::single_snapshot:
      return "single-snapshot";
    case PairStatus::no_valid_snapshot:
      return "no-valid-snapshot";
  }
  return "no-valid-snapshot";
}

std::optional<PairStatus> parse_pair_status(std::string_view s) noexcept {
  if (s == "paired") return PairStatus::paired;
  if (s == "single-snapshot") return PairStatus::single_snapshot;
  if (s == "no-valid-snapshot") return PairStatus::no_valid_snapshot;
  return std::nullopt;
}

std::optional<SnapshotPair> CorpusRecord::pair() const {
  if (status != PairStatus::paired || !initial || !latest) return std::nullopt;
  return SnapshotPair{repo_id, *initial, *latest, gap_days, across_day, n_commits};
}

// ---------------------------------------------------------------------------
// Patterns

PatternSet PatternSet::defaults() {
  PatternSet set;
  set.add("governance-md", R"(^governance\.md$)");
  set.add("governance-variant", R"(^governance([._-].*)?\.(md|markdown|rst|txt)$)");
  set.add("governance-bare", R"(^governance$)");
  return set;
}

void PatternSet::add(std::string name, const std::string& regex) {
  try {
    patterns_.emplace_back(std::move(name),
                           std::regex(regex, std::regex::ECMAScript | std::regex::icase));
  } catch (const std::regex_error& e) {
    throw FormatError("invalid filename pattern '" + regex + "': " + e.what());
  }
}

void PatternSet::load_file(const std::string& path) {
  std::size_t line_no = 0;
  const auto content = read_file(path);
  for (auto line : split(content, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 2)
      throw FormatError(path + ":" + std::to_string(line_no) + ": expected name<TAB>regex");
    add(std::string(trim(fields[0])), std::string(trim(fields[1])));
  }
}

std::optional<std::string> PatternSet::match(std::string_view filename) const {
  for (const auto& [name, re] : patterns_)
    if (std::regex_match(filename.begin(), filename.end(), re)) return name;
  return std::nullopt;
}

std::vector<std::string> PatternSet::names() const {
  std::vector<std::string> out;
  for (const auto& p : patterns_) out.push_back(p.first);
  return out;
}

// ---------------------------------------------------------------------------
// Git access

namespace {

ProcessResult git(const std::string& root, std::vector<std::string> args) {
  std::vector<std::string> argv = {"git", "-c", "safe.directory=*", "-C", root};
  argv.insert(argv.end(), std::make_move_iterator(args.begin()),
              std::make_move_iterator(args.end()));
  return run_process(argv);
}

bool is_bare(const std::string& root) {
  const auto r = git(root, {"rev-parse", "--is-bare-repository"});
  return r.exit_code == 0 && trim(r.out) == "true";
}

}  // namespace

std::vector<GovernanceFileRef> discover_governance_files(const std::string& repo_root,
                                                         const std::string& repo_id,
                                                         const PatternSet& patterns) {
  if (const auto probe = git(repo_root, {"rev-parse", "--git-dir"}); probe.exit_code != 0)
    throw IngestError("repository unreadable: " + repo_id + " (" + repo_root + ")");

  std::set<std::string> names;  // byte-wise order
  const auto tree = git(repo_root, {"ls-tree", "--name-only", "HEAD"});
  if (tree.exit_code == 0) {
    for (auto line : split(tree.out, '\n')) {
      line = trim(line);
      if (!line.empty()) names.emplace(line);
    }
  }
  if (!is_bare(repo_root)) {
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(repo_root, ec)) {
      if (entry.is_regular_file(ec)) names.insert(entry.path().filename().string());
    }
  }

  std::vector<GovernanceFileRef> refs;
  for (const auto& name : names) {
    if (name.find('/') != std::string::npos) continue;
    if (auto pattern = patterns.match(name))
      refs.push_back({repo_id, repo_root, name, *pattern});
  }
  return refs;
}

FileHistory recover_history(const GovernanceFileRef& ref, std::vector<std::string>* warnings) {
  FileHistory history;
  const auto log = git(ref.repo_root, {"log", "--format=%H %ct", "--no-renames", "--", ref.path});
  if (log.exit_code != 0) return history;  // unborn HEAD or untracked
  for (auto line : split(log.out, '\n')) {
    line = trim(line);
    if (line.empty()) continue;
    const auto space = line.find(' ');
    if (space == std::string_view::npos) continue;
    HistoryEntry entry;
    entry.commit = std::string(line.substr(0, space));
    entry.commit_time = std::stoll(std::string(line.substr(space + 1)));
    const auto show = git(ref.repo_root, {"show", entry.commit + ":" + ref.path});
    if (show.exit_code != 0) {
      if (warnings)
        warnings->push_back(ref.repo_id + ": cannot read " + ref.path + " at " + entry.commit);
      continue;
    }
    entry.text = show.out;
    entry.valid = is_valid_snapshot(entry.text);
    history.push_back(std::move(entry));
  }
  // git log lists newest first; stable sort keeps topological order on ties.
  std::reverse(history.begin(), history.end());
  std::stable_sort(history.begin(), history.end(),
                   [](const auto& a, const auto& b) { return a.commit_time < b.commit_time; });
  return history;
}

// ---------------------------------------------------------------------------
// Pairing

std::int64_t utc_day_gap(std::int64_t earlier, std::int64_t later) noexcept {
  using namespace std::chrono;
  const auto d0 = floor<days>(sys_seconds{seconds{earlier}});
  const auto d1 = floor<days>(sys_seconds{seconds{later}});
  return (d1 - d0).count();
}

CorpusRecord pair_snapshots(const std::string& repo_id, const FileHistory& history) {
  std::vector<std::size_t> order(history.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return history[a].commit_time < history[b].commit_time;
  });

  CorpusRecord record;
  record.repo_id = repo_id;
  std::unordered_set<std::string> seen;
  std::vector<const HistoryEntry*> valid;
  for (const auto i : order) {
    const auto& entry = history[i];
    if (!seen.insert(entry.commit).second) continue;
    if (is_valid_snapshot(entry.text)) valid.push_back(&entry);
  }
  record.n_commits = seen.size();
  if (valid.empty()) {
    record.status = PairStatus::no_valid_snapshot;
    return record;
  }
  const auto version = [](const HistoryEntry& e) {
    return SnapshotVersion{e.commit, e.commit_time, e.text};
  };
  record.initial = version(*valid.front());
  if (valid.size() == 1) {
    record.status = PairStatus::single_snapshot;
    return record;
  }
  record.status = PairStatus::paired;
  record.latest = version(*valid.back());
  record.gap_days = utc_day_gap(record.initial->time, record.latest->time);
  record.across_day = record.gap_days > 0;
  return record;
}

FileHistory composite_history(std::span<const PathHistory> files) {
  struct Event {
    std::int64_t time;
    std::string commit;
  };
  std::vector<Event> events;
  std::set<std::string> commits;
  for (const auto& f : files) {
    for (const auto& e : f.entries) {
      if (commits.insert(e.commit).second) events.push_back({e.commit_time, e.commit});
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.time < b.time; });

  FileHistory out;
  for (const auto& ev : events) {
    std::vector<std::pair<std::string, std::string>> state;
    for (const auto& f : files) {
      const HistoryEntry* current = nullptr;
      for (const auto& e : f.entries) {
        if (e.commit_time < ev.time || e.commit == ev.commit) current = &e;
      }
      if (current) state.emplace_back(f.path, current->text);
    }
    HistoryEntry entry;
    entry.commit = ev.commit;
    entry.commit_time = ev.time;
    entry.text = compose_view(std::move(state));
    entry.valid = is_valid_snapshot(entry.text);
    out.push_back(std::move(entry));
  }
  return out;
}

CorpusRecord pair_snapshots(const std::string& repo_id, std::span<const PathHistory> files) {
  if (files.size() == 1) return pair_snapshots(repo_id, files.front().entries);
  return pair_snapshots(repo_id, composite_history(files));
}

std::string compose_view(std::vector<std::pair<std::string, std::string>> files) {
  if (files.empty()) return {};
  if (files.size() == 1) return files.front().second;
  std::stable_sort(files.begin(), files.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::set<std::string> seen;
  std::vector<std::string> kept;
  for (const auto& [path, text] : files) {
    std::string paragraph;
    auto close_paragraph = [&] {
      const auto key = collapse_whitespace(paragraph);
      if (!key.empty() && seen.insert(key).second) kept.push_back(std::string(trim(paragraph)));
      paragraph.clear();
    };
    for (auto line : split(text, '\n')) {
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (trim(line).empty()) {
        close_paragraph();
        continue;
      }
      if (!paragraph.empty()) paragraph.push_back('\n');
      paragraph += line;
    }
    close_paragraph();
  }
  std::string out;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (i > 0) out += "\n\n";
    out += kept[i];
  }
  return out;
}

CorpusRecord ingest_repository(const std::string& repo_root, const std::string& repo_id,
                               const PatternSet& patterns, std::vector<std::string>* warnings) {
  const auto refs = discover_governance_files(repo_root, repo_id, patterns);
  std::vector<PathHistory> histories;
  for (const auto& ref : refs) {
    auto history = recover_history(ref, warnings);
    if (!history.empty()) histories.push_back({ref.path, std::move(history)});
  }
  if (histories.empty()) {
    CorpusRecord record;
    record.repo_id = repo_id;
    record.status = PairStatus::no_valid_snapshot;
    return record;
  }
  return pair_snapshots(repo_id, std::span<const PathHistory>(histories));
}

// ---------------------------------------------------------------------------
// Timestamps

std::string format_rfc3339(std::int64_t unix_seconds) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{unix_seconds}};
  const auto day = floor<days>(tp);
  const year_month_day ymd{day};
  const hh_mm_ss hms{tp - day};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02lldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long long>(hms.seconds().count()));
  return buf;
}

std::int64_t parse_rfc3339(std::string_view text) {
  using namespace std::chrono;
  auto fail = [&]() -> std::int64_t {
    throw FormatError("invalid RFC 3339 timestamp: '" + std::string(text) + "'");
  };
  auto digits = [&](std::size_t pos, std::size_t n) -> int {
    if (pos + n > text.size()) fail();
    int v = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
      if (text[i] < '0' || text[i] > '9') fail();
      v = v * 10 + (text[i] - '0');
    }
    return v;
  };
  if (text.size() < 20 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != 't' && text[10] != ' ') ||
      text[13] != ':' || text[16] != ':')
    return fail();
  const year_month_day ymd{year{digits(0, 4)}, month{static_cast<unsigned>(digits(5, 2))},
                           day{static_cast<unsigned>(digits(8, 2))}};
  if (!ymd.ok()) return fail();
  const int hh = digits(11, 2);
  const int mm = digits(14, 2);
  const int ss = digits(17, 2);
  if (hh > 23 || mm > 59 || ss > 60) return fail();
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
  }
  std::int64_t offset = 0;
  if (pos >= text.size()) return fail();
  if (text[pos] == 'Z' || text[pos] == 'z') {
    if (pos + 1 != text.size()) return fail();
  } else if (text[pos] == '+' || text[pos] == '-') {
    if (pos + 6 != text.size() || text[pos + 3] != ':') return fail();
    offset = (digits(pos + 1, 2) * 3600 + digits(pos + 4, 2) * 60) * (text[pos] == '-' ? -1 : 1);
  } else {
    return fail();
  }
  const auto tp = sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss};
  return tp.time_since_epoch().count() - offset;
}

}  // namespace govgram
