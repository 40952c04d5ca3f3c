#include "govgram/records.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "govgram/error.hpp"
#include "govgram/text_util.hpp"

namespace govgram {

using Json = nlohmann::ordered_json;

namespace {

std::string dump(const Json& j) {
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

Json parse_line(std::string_view line) {
  try {
    auto j = Json::parse(line);
    if (!j.is_object()) throw FormatError("record is not a JSON object");
    return j;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("invalid JSON record: ") + e.what());
  }
}

template <typename T>
T get(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const Json::exception&) {
    throw FormatError(std::string("field '") + key + "' has the wrong type");
  }
}

template <typename T>
std::optional<T> get_opt(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return get<T>(j, key);
}

Json span_json(const Span& s) { return Json::array({s.begin, s.end}); }

Json opt_span_json(const std::optional<Span>& s) { return s ? span_json(*s) : Json(nullptr); }

Span span_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw FormatError("span must be [begin, end]");
  Span s{j[0].get<std::size_t>(), j[1].get<std::size_t>()};
  if (s.end < s.begin) throw FormatError("span end precedes begin");
  return s;
}

std::optional<Span> opt_span_from(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return span_from(*it);
}

template <typename T>
Json opt_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Snapshot snapshot_from(const Json& j) {
  const auto s = parse_snapshot(get<std::string>(j, "snapshot"));
  if (!s) throw FormatError("snapshot must be initial or latest");
  return *s;
}

Json version_json(const std::optional<SnapshotVersion>& v) {
  if (!v) return nullptr;
  Json j;
  j["commit"] = v->commit;
  j["time"] = format_rfc3339(v->time);
  j["text"] = v->text;
  return j;
}

std::optional<SnapshotVersion> version_from(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return SnapshotVersion{get<std::string>(*it, "commit"),
                         parse_rfc3339(get<std::string>(*it, "time")),
                         get<std::string>(*it, "text")};
}

}  // namespace

// ---------------------------------------------------------------------------

std::string corpus_record_to_json(const CorpusRecord& r) {
  Json j;
  j["repo_id"] = r.repo_id;
  j["status"] = std::string(to_string(r.status));
  j["initial"] = version_json(r.initial);
  j["latest"] = version_json(r.latest);
  j["gap_days"] = r.gap_days;
  j["across_day"] = r.across_day;
  j["n_commits"] = r.n_commits;
  return dump(j);
}

CorpusRecord corpus_record_from_json(std::string_view line) {
  const auto j = parse_line(line);
  CorpusRecord r;
  r.repo_id = get<std::string>(j, "repo_id");
  const auto status = parse_pair_status(get<std::string>(j, "status"));
  if (!status) throw FormatError("unknown status for " + r.repo_id);
  r.status = *status;
  r.initial = version_from(j, "initial");
  r.latest = version_from(j, "latest");
  r.gap_days = get_opt<std::int64_t>(j, "gap_days").value_or(0);
  r.n_commits = get_opt<std::size_t>(j, "n_commits").value_or(0);
  if (const auto across = get_opt<bool>(j, "across_day")) {
    r.across_day = *across;
  } else {
    r.across_day = r.gap_days > 0;
  }
  if (r.status == PairStatus::paired && (!r.initial || !r.latest))
    throw FormatError("paired record without both snapshots: " + r.repo_id);
  if (r.initial && r.latest && r.initial->time > r.latest->time)
    throw FormatError("initial snapshot is newer than latest: " + r.repo_id);
  return r;
}

// ---------------------------------------------------------------------------

std::string sentences_record_to_json(const SnapshotSentences& r) {
  Json j;
  j["repo_id"] = r.repo_id;
  j["snapshot"] = std::string(to_string(r.snapshot));
  j["across_day"] = r.across_day;
  j["section_count"] = r.section_count;
  Json sentences = Json::array();
  for (const auto& s : r.sentences) {
    Json js;
    js["text"] = s.text;
    js["block"] = s.block_index;
    js["span"] = span_json(s.char_span);
    Json subs = Json::array();
    for (const auto& sub : s.substitutions) {
      Json jsub;
      jsub["span"] = span_json(sub.span);
      jsub["pronoun"] = sub.pronoun;
      jsub["antecedent"] = sub.antecedent;
      subs.push_back(std::move(jsub));
    }
    js["substitutions"] = std::move(subs);
    sentences.push_back(std::move(js));
  }
  j["sentences"] = std::move(sentences);
  return dump(j);
}

SnapshotSentences sentences_record_from_json(std::string_view line) {
  const auto j = parse_line(line);
  SnapshotSentences r;
  r.repo_id = get<std::string>(j, "repo_id");
  r.snapshot = snapshot_from(j);
  r.across_day = get_opt<bool>(j, "across_day").value_or(false);
  r.section_count = get_opt<std::size_t>(j, "section_count").value_or(0);
  for (const auto& js : get<Json>(j, "sentences")) {
    Sentence s;
    s.text = get<std::string>(js, "text");
    s.block_index = get_opt<std::size_t>(js, "block").value_or(0);
    if (auto span = opt_span_from(js, "span")) s.char_span = *span;
    if (const auto it = js.find("substitutions"); it != js.end() && it->is_array()) {
      for (const auto& jsub : *it) {
        s.substitutions.push_back({span_from(get<Json>(jsub, "span")),
                                   get<std::string>(jsub, "pronoun"),
                                   get<std::string>(jsub, "antecedent")});
      }
    }
    r.sentences.push_back(std::move(s));
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

void statement_fields(Json& j, const InstitutionalStatement& s) {
  Json ref;
  ref["repo_id"] = s.ref.repo_id;
  ref["snapshot"] = std::string(to_string(s.ref.snapshot));
  ref["sentence"] = s.ref.sentence;
  ref["clause"] = s.ref.clause;
  j["sentence_ref"] = std::move(ref);
  j["sentence_text"] = s.sentence_text;
  j["role"] = opt_json(s.role_text);
  j["role_span"] = opt_span_json(s.role_span);
  if (s.deontic) {
    Json d;
    d["surface"] = s.deontic->surface();
    d["modal"] = std::string(to_string(s.deontic->modal));
    d["strength"] = std::string(to_string(s.deontic->strength()));
    d["polarity"] = std::string(to_string(s.deontic->polarity()));
    j["deontic"] = std::move(d);
  } else {
    j["deontic"] = nullptr;
  }
  j["deontic_span"] = opt_span_json(s.deontic_span);
  j["action"] = opt_json(s.action_lemma);
  j["action_span"] = opt_span_json(s.action_span);
  j["object"] = opt_json(s.object_text);
  j["object_span"] = opt_span_json(s.object_span);
}

InstitutionalStatement statement_from(const Json& j) {
  InstitutionalStatement s;
  const auto ref = get<Json>(j, "sentence_ref");
  s.ref.repo_id = get<std::string>(ref, "repo_id");
  s.ref.snapshot = snapshot_from(ref);
  s.ref.sentence = get<std::size_t>(ref, "sentence");
  s.ref.clause = get_opt<std::size_t>(ref, "clause").value_or(0);
  s.sentence_text = get_opt<std::string>(j, "sentence_text").value_or("");
  s.role_text = get_opt<std::string>(j, "role");
  s.role_span = opt_span_from(j, "role_span");
  if (const auto it = j.find("deontic"); it != j.end() && !it->is_null()) {
    std::optional<DeonticType> d;
    if (auto modal = get_opt<std::string>(*it, "modal")) {
      const auto m = parse_modal(*modal);
      if (!m) throw FormatError("unknown modal '" + *modal + "'");
      const auto polarity = get_opt<std::string>(*it, "polarity").value_or("enabling");
      d = DeonticType{*m, polarity == "restricting"};
    } else {
      d = parse_deontic_surface(get<std::string>(*it, "surface"));
    }
    if (!d) throw FormatError("unrecognized deontic in statement record");
    s.deontic = d;
  }
  s.deontic_span = opt_span_from(j, "deontic_span");
  s.action_lemma = get_opt<std::string>(j, "action");
  s.action_span = opt_span_from(j, "action_span");
  s.object_text = get_opt<std::string>(j, "object");
  s.object_span = opt_span_from(j, "object_span");
  return s;
}

}  // namespace

std::string statement_record_to_json(const StatementRecord& r) {
  Json j;
  statement_fields(j, r.statement);
  j["across_day"] = r.across_day;
  return dump(j);
}

StatementRecord statement_record_from_json(std::string_view line) {
  const auto j = parse_line(line);
  return {statement_from(j), get_opt<bool>(j, "across_day").value_or(false)};
}

std::string labeled_record_to_json(const LabeledRecord& r) {
  Json j;
  statement_fields(j, r.labeled.statement);
  j["across_day"] = r.across_day;
  const auto& l = r.labeled;
  j["role_category"] = l.role_category ? Json(std::string(to_string(*l.role_category))) : Json();
  j["action_category"] =
      l.action_category ? Json(std::string(to_string(*l.action_category))) : Json();
  j["deontic_strength"] =
      l.deontic_strength ? Json(std::string(to_string(*l.deontic_strength))) : Json();
  j["deontic_polarity"] =
      l.deontic_polarity ? Json(std::string(to_string(*l.deontic_polarity))) : Json();
  return dump(j);
}

LabeledRecord labeled_record_from_json(std::string_view line) {
  const auto j = parse_line(line);
  LabeledRecord r;
  r.labeled.statement = statement_from(j);
  r.across_day = get_opt<bool>(j, "across_day").value_or(false);
  auto category = [&](const char* key, auto parse) {
    auto name = get_opt<std::string>(j, key);
    using Result = decltype(parse(std::string_view{}));
    if (!name) return Result{};
    auto value = parse(*name);
    if (!value) throw FormatError(std::string("unknown ") + key + " '" + *name + "'");
    return value;
  };
  r.labeled.role_category = category("role_category", parse_role_category);
  r.labeled.action_category = category("action_category", parse_action_category);
  r.labeled.deontic_strength = category("deontic_strength", parse_deontic_strength);
  r.labeled.deontic_polarity = category("deontic_polarity", parse_deontic_polarity);
  return r;
}

// ---------------------------------------------------------------------------

std::vector<std::string> read_jsonl_lines(const std::string& path) {
  std::vector<std::string> lines;
  const auto content = read_file(path);
  for (auto line : split(content, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!trim(line).empty()) lines.emplace_back(line);
  }
  return lines;
}

namespace {

template <typename Parse>
auto read_records(const std::string& path, Parse parse) {
  std::vector<decltype(parse(std::string_view{}))> out;
  std::size_t n = 0;
  for (const auto& line : read_jsonl_lines(path)) {
    ++n;
    try {
      out.push_back(parse(line));
    } catch (const FormatError& e) {
      throw FormatError(path + ": record " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

std::vector<CorpusRecord> read_corpus(const std::string& path) {
  return read_records(path, corpus_record_from_json);
}

std::vector<SnapshotSentences> read_sentences(const std::string& path) {
  return read_records(path, sentences_record_from_json);
}

std::vector<StatementRecord> read_statements(const std::string& path) {
  return read_records(path, statement_record_from_json);
}

std::vector<LabeledRecord> read_labeled(const std::string& path) {
  return read_records(path, labeled_record_from_json);
}

std::vector<LabeledPair> group_pairs(std::vector<LabeledRecord> records, bool across_day_only) {
  std::map<std::string, LabeledPair> by_repo;
  for (auto& r : records) {
    const auto& ref = r.labeled.statement.ref;
    auto& pair = by_repo[ref.repo_id];
    pair.repo_id = ref.repo_id;
    pair.across_day = pair.across_day || r.across_day;
    auto& side = ref.snapshot == Snapshot::initial ? pair.initial : pair.latest;
    side.push_back(std::move(r.labeled));
  }
  std::vector<LabeledPair> out;
  for (auto& [id, pair] : by_repo) {
    if (across_day_only && !pair.across_day) continue;
    for (auto* side : {&pair.initial, &pair.latest}) {
      std::stable_sort(side->begin(), side->end(), [](const auto& a, const auto& b) {
        const auto& x = a.statement.ref;
        const auto& y = b.statement.ref;
        return std::tie(x.sentence, x.clause) < std::tie(y.sentence, y.clause);
      });
    }
    out.push_back(std::move(pair));
  }
  return out;
}

}  // namespace govgram
