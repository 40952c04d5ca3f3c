#include "govgram/report.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <set>

#include <json.hpp>

#include "govgram/error.hpp"
#include "govgram/labeling.hpp"
#include "govgram/text_util.hpp"

namespace govgram {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Configuration

void RunConfig::validate() const {
  if (B == 0) throw FormatError("B must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw FormatError("alpha must lie in (0, 1)");
  if (tau == 0) throw FormatError("tau must be positive");
  if (rarefaction_draws == 0) throw FormatError("rarefaction_draws must be positive");
  if (rarefaction_cap == 0) throw FormatError("rarefaction_cap must be positive");
  if (min_labeled == 0) throw FormatError("min_labeled must be positive");
  if (threads == 0) throw FormatError("threads must be positive");
}

MetricsConfig RunConfig::metrics() const {
  MetricsConfig m;
  m.tau = tau;
  m.rarefaction_cap = rarefaction_cap;
  m.rarefaction_draws = rarefaction_draws;
  m.min_labeled = min_labeled;
  m.seed = seed;
  m.normalize_entropy = normalize_entropy;
  return m;
}

BootstrapConfig RunConfig::bootstrap() const { return {B, alpha, seed, threads}; }

namespace {

std::uint64_t parse_unsigned(const std::string& key, std::string_view value) {
  std::uint64_t v = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end || value.empty())
    throw FormatError("config: " + key + " expects a non-negative integer, got '" +
                      std::string(value) + "'");
  return v;
}

bool parse_boolean(const std::string& key, std::string_view value) {
  const auto v = to_lower(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw FormatError("config: " + key + " expects true or false");
}

double parse_real(const std::string& key, std::string_view value) {
  try {
    std::size_t used = 0;
    const std::string s(value);
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw FormatError("config: " + key + " expects a number");
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
  RunConfig c;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos &&
                                          line.substr(0, hash).find('"') == std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;  // blank, comment or table header
    const auto eq = line.find_first_of("=:");
    if (eq == std::string_view::npos)
      throw FormatError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    auto value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);

    if (key == "seed") {
      c.seed = parse_unsigned(key, value);
    } else if (key == "B") {
      c.B = parse_unsigned(key, value);
    } else if (key == "alpha") {
      c.alpha = parse_real(key, value);
    } else if (key == "tau") {
      c.tau = parse_unsigned(key, value);
    } else if (key == "rarefaction_draws") {
      c.rarefaction_draws = parse_unsigned(key, value);
    } else if (key == "rarefaction_cap") {
      c.rarefaction_cap = parse_unsigned(key, value);
    } else if (key == "across_day_only") {
      c.across_day_only = parse_boolean(key, value);
    } else if (key == "lexicon_dir") {
      c.lexicon_dir = std::string(value);
    } else if (key == "min_labeled") {
      c.min_labeled = parse_unsigned(key, value);
    } else if (key == "normalize_entropy") {
      c.normalize_entropy = parse_boolean(key, value);
    } else if (key == "threads") {
      c.threads = static_cast<unsigned>(parse_unsigned(key, value));
    } else {
      throw FormatError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  auto c = parse_run_config(read_file(path));
  if (!c.lexicon_dir.empty() && fs::path(c.lexicon_dir).is_relative())
    c.lexicon_dir = (fs::path(path).parent_path() / c.lexicon_dir).lexically_normal().string();
  return c;
}

TaxonomyLexicons load_lexicons(const std::string& dir) {
  return dir.empty() ? TaxonomyLexicons::load_default() : TaxonomyLexicons::load(dir);
}

// ---------------------------------------------------------------------------
// Stages

namespace {

std::string record_name(const std::string& repo_id, Snapshot snapshot) {
  return repo_id + ":" + std::string(to_string(snapshot));
}

}  // namespace

std::vector<SnapshotSentences> normalize_corpus(std::span<const CorpusRecord> corpus,
                                                const TaxonomyLexicons& lexicons,
                                                unsigned threads) {
  std::vector<const CorpusRecord*> paired;
  for (const auto& r : corpus)
    if (r.status == PairStatus::paired && r.initial && r.latest) paired.push_back(&r);
  std::stable_sort(paired.begin(), paired.end(),
                   [](const auto* a, const auto* b) { return a->repo_id < b->repo_id; });

  std::vector<SnapshotSentences> out(paired.size() * 2);
  parallel_for(out.size(), threads, [&](std::size_t i) {
    const auto& record = *paired[i / 2];
    const auto snapshot = i % 2 == 0 ? Snapshot::initial : Snapshot::latest;
    const auto& text = snapshot == Snapshot::initial ? record.initial->text : record.latest->text;
    try {
      auto doc = normalize_document(text, lexicons.roles);
      auto& s = out[i];
      s.repo_id = record.repo_id;
      s.snapshot = snapshot;
      s.across_day = record.across_day;
      s.section_count = doc.section_count;
      s.sentences = std::move(doc.sentences);
    } catch (const std::exception& e) {
      throw StageError("normalize", record_name(record.repo_id, snapshot), e.what());
    }
  });
  return out;
}

std::vector<StatementRecord> parse_snapshots(std::span<const SnapshotSentences> snapshots,
                                             const TaxonomyLexicons& lexicons, unsigned threads) {
  std::vector<const SnapshotSentences*> order;
  for (const auto& s : snapshots) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    return std::tie(a->repo_id, a->snapshot) < std::tie(b->repo_id, b->snapshot);
  });

  std::vector<std::vector<StatementRecord>> parts(order.size());
  parallel_for(order.size(), threads, [&](std::size_t i) {
    const auto& snap = *order[i];
    for (std::size_t k = 0; k < snap.sentences.size(); ++k) {
      try {
        const SentenceRef ref{snap.repo_id, snap.snapshot, k, 0};
        for (auto& st : parse_sentence(snap.sentences[k], ref, lexicons))
          parts[i].push_back({std::move(st), snap.across_day});
      } catch (const std::exception& e) {
        throw StageError("parse",
                         record_name(snap.repo_id, snap.snapshot) + "#" + std::to_string(k),
                         e.what());
      }
    }
  });
  std::vector<StatementRecord> out;
  for (auto& p : parts)
    out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  return out;
}

std::vector<LabeledRecord> label_statements(std::span<const StatementRecord> statements,
                                            const TaxonomyLexicons& lexicons) {
  const LexiconLabeler labeler(lexicons);
  std::vector<LabeledRecord> out;
  out.reserve(statements.size());
  for (const auto& s : statements) {
    try {
      out.push_back({labeler.label(s.statement), s.across_day});
    } catch (const std::exception& e) {
      const auto& ref = s.statement.ref;
      throw StageError("label",
                       record_name(ref.repo_id, ref.snapshot) + "#" + std::to_string(ref.sentence),
                       e.what());
    }
  }
  return out;
}

InferenceTables run_inference(std::span<const RepoMetrics> metrics,
                              std::span<const LabeledPair> pairs, const BootstrapConfig& config) {
  InferenceTables t;
  for (const auto f : kCountFeatures) t.counts.push_back(summarize_counts(metrics, f, config));
  for (const auto f : kEntropyFeatures) t.entropy.push_back(summarize_entropy(metrics, f, config));
  for (const auto f : kFeatures) {
    const auto shares = repo_shares(pairs, f);
    t.shares[f] = share_deltas(shares, f, config);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string fixed_or_na(const std::optional<double>& v, int digits) {
  return v ? format_fixed(*v, digits) : "NA";
}

std::string ci_text(const std::optional<BootstrapResult>& r, bool insufficient, int digits) {
  if (!r) return "NA";
  std::string s = format_fixed(r->mean, digits);
  if (r->mean > 0.0 && s.front() != '-') s = "+" + s;
  if (insufficient) return s + " (insufficient-n)";
  return s + " [" + format_fixed(r->ci_low, digits) + ", " + format_fixed(r->ci_high, digits) +
         "]";
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string text_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()));
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) line += pad(row[i], widths[i] + 2);
    out += std::string(trim(line)) + '\n';
  }
  return out;
}

std::string summary_text(const InferenceTables& t) {
  std::string out = "Distinct categories (K, tau-thresholded)\n\n";
  std::vector<std::vector<std::string>> rows = {
      {"feature", "n", "initial K", "latest K", "mean dK [CI]", "rarefied dK [CI]"}};
  for (const auto& s : t.counts) {
    rows.push_back({std::string(to_string(s.feature)), std::to_string(s.n),
                    fixed_or_na(s.initial_K, 2), fixed_or_na(s.latest_K, 2),
                    ci_text(s.delta_K, s.insufficient_n, 3),
                    ci_text(s.rarefied_delta_K, s.insufficient_n, 3)});
  }
  out += text_table(rows);
  out += "\nEntropy (bits)\n\n";
  rows = {{"feature", "n", "initial H", "latest H", "dH [CI]", "JSD [CI]"}};
  for (const auto& s : t.entropy) {
    rows.push_back({std::string(to_string(s.feature)), std::to_string(s.n),
                    fixed_or_na(s.initial_H, 3), fixed_or_na(s.latest_H, 3),
                    ci_text(s.delta_H, s.insufficient_n, 3), ci_text(s.jsd, s.insufficient_n, 3)});
  }
  out += text_table(rows);
  for (const auto& [feature, deltas] : t.shares) {
    out += "\nShare change, " + std::string(to_string(feature)) + " (pp)\n\n";
    rows = {{"category", "initial %", "latest %", "delta pp [CI]"}};
    for (const auto& d : deltas) {
      rows.push_back({d.category, format_fixed(d.initial_share_pct, 2),
                      format_fixed(d.latest_share_pct, 2),
                      ci_text(d.ci, d.ci.n_repos < 2, 2)});
    }
    if (deltas.empty()) rows.push_back({"(no eligible repositories)"});
    out += text_table(rows);
  }
  return out;
}

std::string output_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

}  // namespace

std::vector<std::string> write_inference(const InferenceTables& t, const std::string& out_dir) {
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    write_file(output_path(out_dir, name), content);
    written.push_back(name);
  };
  emit("summary_counts.csv", format_summary_counts(t.counts));
  emit("summary_entropy.csv", format_summary_entropy(t.entropy));
  for (const auto& [feature, deltas] : t.shares)
    emit("share_deltas_" + std::string(to_string(feature)) + ".csv", format_share_deltas(deltas));
  emit("summary.txt", summary_text(t));
  return written;
}

namespace {

std::string pooled_shares(const std::vector<std::string_view>& categories,
                          const std::map<std::string, std::size_t>& initial,
                          const std::map<std::string, std::size_t>& latest) {
  std::string out = "category,initial_pct,latest_pct\n";
  std::size_t n_initial = 0;
  std::size_t n_latest = 0;
  for (const auto& [k, c] : initial) n_initial += c;
  for (const auto& [k, c] : latest) n_latest += c;
  if (n_initial == 0 && n_latest == 0) return out;
  auto pct = [](const std::map<std::string, std::size_t>& counts, std::string_view k,
                std::size_t n) -> std::string {
    if (n == 0) return "NA";
    const auto it = counts.find(std::string(k));
    const double c = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    return format_double(100.0 * c / static_cast<double>(n));
  };
  for (const auto k : categories)
    out += std::string(k) + ',' + pct(initial, k, n_initial) + ',' + pct(latest, k, n_latest) +
           '\n';
  return out;
}

}  // namespace

std::string format_share_table(std::span<const LabeledPair> pairs, Feature feature) {
  std::map<std::string, std::size_t> initial;
  std::map<std::string, std::size_t> latest;
  for (const auto& p : pairs) {
    for (const auto& l : feature_labels(p.initial, feature)) ++initial[l];
    for (const auto& l : feature_labels(p.latest, feature)) ++latest[l];
  }
  const auto cats = feature_categories(feature);
  return pooled_shares({cats.begin(), cats.end()}, initial, latest);
}

std::string format_modal_share_table(std::span<const LabeledPair> pairs) {
  auto group = [](const LabeledStatement& s) -> std::optional<std::string> {
    if (!s.statement.deontic) return std::nullopt;
    switch (s.statement.deontic->modal) {
      case Modal::can:
      case Modal::may:
        return "can_may";
      case Modal::must:
      case Modal::will:
      case Modal::shall:
        return "must_will";
      case Modal::should:
        return "should";
      case Modal::could:
      case Modal::would:
        break;
    }
    return std::nullopt;
  };
  std::map<std::string, std::size_t> initial;
  std::map<std::string, std::size_t> latest;
  for (const auto& p : pairs) {
    for (const auto& s : p.initial)
      if (auto g = group(s)) ++initial[*g];
    for (const auto& s : p.latest)
      if (auto g = group(s)) ++latest[*g];
  }
  return pooled_shares({"can_may", "must_will", "should"}, initial, latest);
}

std::string format_violin_table(std::span<const RepoMetrics> metrics, Feature feature) {
  std::vector<const RepoMetrics*> rows;
  for (const auto& m : metrics)
    if (m.feature == feature && m.eligible_K) rows.push_back(&m);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto* a, const auto* b) { return a->repo_id < b->repo_id; });
  std::string out = "repo_id,snapshot,K\n";
  for (const auto* m : rows) {
    out += csv_field(m->repo_id) + ",initial," + std::to_string(m->K_initial) + '\n';
    out += csv_field(m->repo_id) + ",latest," + std::to_string(m->K_latest) + '\n';
  }
  return out;
}

std::vector<std::string> emit_figure_data(std::span<const LabeledPair> pairs,
                                          std::span<const RepoMetrics> metrics,
                                          const std::string& out_dir) {
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    write_file(output_path(out_dir, name), content);
    written.push_back(name);
  };
  emit("role_shares.csv", format_share_table(pairs, Feature::roles));
  emit("action_shares.csv", format_share_table(pairs, Feature::actions));
  emit("deontic_shares.csv", format_modal_share_table(pairs));
  emit("deontic_binary_shares.csv", format_share_table(pairs, Feature::deontics_binary));
  for (const auto f : kFeatures)
    emit("violin_" + std::string(to_string(f)) + ".csv", format_violin_table(metrics, f));
  return written;
}

// ---------------------------------------------------------------------------
// Orchestration

namespace {

template <typename T, typename ToJson>
std::string jsonl(const std::vector<T>& records, ToJson to_json) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r);
    out += '\n';
  }
  return out;
}

std::vector<LabeledPair> pairs_for(std::span<const CorpusRecord> corpus,
                                   std::vector<LabeledRecord> labeled, bool across_day_only) {
  auto grouped = group_pairs(std::move(labeled), false);
  std::map<std::string, LabeledPair> by_repo;
  for (auto& p : grouped) by_repo.emplace(p.repo_id, std::move(p));
  std::vector<LabeledPair> out;
  std::set<std::string> seen;
  std::vector<const CorpusRecord*> paired;
  for (const auto& r : corpus)
    if (r.status == PairStatus::paired) paired.push_back(&r);
  std::stable_sort(paired.begin(), paired.end(),
                   [](const auto* a, const auto* b) { return a->repo_id < b->repo_id; });
  for (const auto* r : paired) {
    if (!seen.insert(r->repo_id).second) continue;
    if (across_day_only && !r->across_day) continue;
    auto it = by_repo.find(r->repo_id);
    LabeledPair pair = it == by_repo.end() ? LabeledPair{} : std::move(it->second);
    pair.repo_id = r->repo_id;
    pair.across_day = r->across_day;
    out.push_back(std::move(pair));
  }
  return out;
}

template <typename F>
auto stage(const std::string& name, F&& body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, "", e.what());
  }
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& config, const std::string& corpus_path,
                            const std::string& out_dir) {
  using Json = nlohmann::ordered_json;
  stage("config", [&] {
    config.validate();
    return 0;
  });
  const auto lexicons = stage("lexicon", [&] { return load_lexicons(config.lexicon_dir); });
  const auto corpus_text = stage("corpus", [&] { return read_file(corpus_path); });
  const auto corpus = stage("corpus", [&] { return read_corpus(corpus_path); });
  stage("output", [&] {
    fs::create_directories(out_dir);
    return 0;
  });

  PipelineResult result;
  auto& counts = result.counts;
  auto emit = [&](const std::string& name, const std::string& content) {
    stage("emit", [&] {
      write_file(output_path(out_dir, name), content);
      return 0;
    });
    result.outputs.push_back(name);
  };

  counts["corpus_records"] = corpus.size();
  std::set<std::string> ids;
  for (const auto& r : corpus) {
    if (!ids.insert(r.repo_id).second)
      throw StageError("corpus", r.repo_id, "duplicate repository id");
    if (r.status == PairStatus::paired) {
      ++counts["paired"];
      if (r.across_day) ++counts["across_day_pairs"];
    }
  }
  counts.emplace("paired", 0);
  counts.emplace("across_day_pairs", 0);

  const auto sentences = normalize_corpus(corpus, lexicons, config.threads);
  counts["snapshots"] = sentences.size();
  counts["sentences"] = 0;
  for (const auto& s : sentences) counts["sentences"] += s.sentences.size();
  emit("sentences.jsonl", jsonl(sentences, sentences_record_to_json));

  const auto statements = parse_snapshots(sentences, lexicons, config.threads);
  counts["statements"] = statements.size();
  emit("statements.jsonl", jsonl(statements, statement_record_to_json));

  auto labeled = label_statements(statements, lexicons);
  counts["labeled_records"] = labeled.size();
  emit("labeled.jsonl", jsonl(labeled, labeled_record_to_json));

  const auto pairs = pairs_for(corpus, std::move(labeled), config.across_day_only);
  counts["analysis_pairs"] = pairs.size();
  for (const auto f : kFeatures) {
    std::size_t n = 0;
    for (const auto& p : pairs)
      n += feature_labels(p.initial, f).size() + feature_labels(p.latest, f).size();
    counts["labeled_" + std::string(to_string(f))] = n;
  }

  if (!pairs.empty()) {
    const auto metrics = stage("metrics", [&] {
      return compute_all_metrics(pairs, config.metrics(), config.threads);
    });
    emit("metrics.csv", format_metrics_csv(metrics));
    const auto tables =
        stage("infer", [&] { return run_inference(metrics, pairs, config.bootstrap()); });
    for (auto& name : stage("emit", [&] { return write_inference(tables, out_dir); }))
      result.outputs.push_back(std::move(name));
    for (auto& name : stage("emit", [&] { return emit_figure_data(pairs, metrics, out_dir); }))
      result.outputs.push_back(std::move(name));
  }

  Json manifest;
  Json cfg;
  cfg["seed"] = config.seed;
  cfg["B"] = config.B;
  cfg["alpha"] = config.alpha;
  cfg["tau"] = config.tau;
  cfg["rarefaction_draws"] = config.rarefaction_draws;
  cfg["rarefaction_cap"] = config.rarefaction_cap;
  cfg["across_day_only"] = config.across_day_only;
  cfg["min_labeled"] = config.min_labeled;
  cfg["normalize_entropy"] = config.normalize_entropy;
  manifest["config"] = std::move(cfg);
  manifest["corpus_sha256"] = sha256_hex(corpus_text);
  manifest["lexicons"] = {{"roles.tsv", lexicons.roles.checksum()},
                          {"actions.tsv", lexicons.actions.checksum()}};
  Json jcounts;
  for (const auto& [k, v] : counts) jcounts[k] = v;
  manifest["counts"] = std::move(jcounts);
  Json outputs;
  std::vector<std::string> names = result.outputs;
  std::sort(names.begin(), names.end());
  for (const auto& name : names)
    outputs[name] = sha256_hex(read_file(output_path(out_dir, name)));
  manifest["outputs"] = std::move(outputs);
  write_file(output_path(out_dir, "manifest.json"), manifest.dump(2) + "\n");
  result.outputs.push_back("manifest.json");
  return result;
}

}  // namespace govgram
