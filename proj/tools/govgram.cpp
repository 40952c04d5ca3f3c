// govgram: governance document mining pipeline.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>
#include <thread>

#include <CLI11.hpp>

#include "govgram/error.hpp"
#include "govgram/ingest.hpp"
#include "govgram/labeling.hpp"
#include "govgram/metrics.hpp"
#include "govgram/records.hpp"
#include "govgram/report.hpp"
#include "govgram/text_util.hpp"

namespace fs = std::filesystem;
using namespace govgram;

namespace {

struct RepoEntry {
  std::string id;
  std::string path;
};

// Lines are `path` or `repo_id<TAB>path`; '#' starts a comment.
std::vector<RepoEntry> read_repo_list(const std::string& list_path) {
  std::vector<RepoEntry> repos;
  const auto base = fs::path(list_path).parent_path();
  const auto content = read_file(list_path);
  for (auto line : split(content, '\n')) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    RepoEntry e;
    if (const auto tab = line.find('\t'); tab != std::string_view::npos) {
      e.id = std::string(trim(line.substr(0, tab)));
      e.path = std::string(trim(line.substr(tab + 1)));
    } else {
      e.path = std::string(line);
      e.id = fs::path(e.path).lexically_normal().filename().string();
      if (e.id.empty()) e.id = fs::path(e.path).lexically_normal().parent_path().filename().string();
    }
    if (fs::path(e.path).is_relative()) e.path = (base / e.path).lexically_normal().string();
    repos.push_back(std::move(e));
  }
  return repos;
}

template <typename T, typename ToJson>
void write_jsonl(const std::string& path, const std::vector<T>& records, ToJson to_json) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r);
    out += '\n';
  }
  write_file(path, out);
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extract institutional statements from governance documents and measure change"};
  app.require_subcommand(1);
  unsigned threads = default_threads();
  app.add_option("--threads", threads, "Worker threads (output does not depend on it)")
      ->check(CLI::PositiveNumber);

  // ingest
  std::string repos_file, corpus_out, patterns_file;
  auto* ingest = app.add_subcommand("ingest", "Pair earliest and latest governance snapshots");
  ingest->add_option("--repos", repos_file, "Repository list file")->required();
  ingest->add_option("--out", corpus_out, "Corpus JSONL")->required();
  ingest->add_option("--patterns", patterns_file, "Extra filename patterns (name<TAB>regex)");

  // normalize / parse / label
  std::string in_path, out_path, lexicon_dir;
  auto* normalize = app.add_subcommand("normalize", "Strip markup and segment sentences");
  normalize->add_option("--in", in_path, "Corpus JSONL")->required();
  normalize->add_option("--out", out_path, "Sentences JSONL")->required();
  normalize->add_option("--lexicon", lexicon_dir, "Lexicon directory");

  auto* parse = app.add_subcommand("parse", "Extract role, deontic, action and object");
  parse->add_option("--in", in_path, "Sentences JSONL")->required();
  parse->add_option("--out", out_path, "Statements JSONL")->required();
  parse->add_option("--lexicon", lexicon_dir, "Lexicon directory");

  auto* label = app.add_subcommand("label", "Assign taxonomy categories");
  label->add_option("--in", in_path, "Statements JSONL")->required();
  label->add_option("--out", out_path, "Labeled JSONL")->required();
  label->add_option("--lexicon", lexicon_dir, "Lexicon directory");

  // metrics
  RunConfig rc;
  auto* metrics = app.add_subcommand("metrics", "Per-repository entropy, JSD and counts");
  metrics->add_option("--in", in_path, "Labeled JSONL")->required();
  metrics->add_option("--out", out_path, "Metrics CSV")->required();
  metrics->add_option("--seed", rc.seed, "Random seed")->capture_default_str();
  metrics->add_option("--rarefaction-draws", rc.rarefaction_draws, "Rarefaction draws")->capture_default_str()
      ->check(CLI::PositiveNumber);
  metrics->add_option("--rarefaction-cap", rc.rarefaction_cap, "Rarefaction sample cap")->capture_default_str()
      ->check(CLI::PositiveNumber);
  metrics->add_option("--tau", rc.tau, "Presence threshold for K")->capture_default_str()
      ->check(CLI::PositiveNumber);
  metrics->add_option("--min-labeled", rc.min_labeled, "Entropy screen")->capture_default_str()
      ->check(CLI::PositiveNumber);
  metrics->add_flag("--across-day-only", rc.across_day_only, "Keep across-day pairs only");
  metrics->add_flag("--normalize-entropy", rc.normalize_entropy,
                    "Divide entropy by log2 of the support size");

  // infer
  std::string metrics_path, labeled_path, out_dir;
  auto* infer = app.add_subcommand("infer", "Bootstrap summaries and share changes");
  infer->add_option("--metrics", metrics_path, "Metrics CSV")->required();
  infer->add_option("--labeled", labeled_path, "Labeled JSONL")->required();
  infer->add_option("--out-dir", out_dir, "Results directory")->required();
  infer->add_option("--B", rc.B, "Bootstrap replicates")->capture_default_str()->check(CLI::PositiveNumber);
  infer->add_option("--alpha", rc.alpha, "Interval level is 1 - alpha")->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  infer->add_option("--seed", rc.seed, "Random seed")->capture_default_str();

  // run
  std::string config_path, corpus_path;
  auto* run = app.add_subcommand("run", "Full pipeline from a corpus");
  run->add_option("--config", config_path, "Flat key = value config");
  run->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
  run->add_option("--out", out_dir, "Results directory")->required();

  // reliability
  std::size_t sample = 50;
  std::vector<std::string> coders;
  auto* reliability = app.add_subcommand("reliability", "Agreement between two coders");
  reliability->add_option("--sample", sample, "Items compared")->capture_default_str()
      ->check(CLI::PositiveNumber);
  reliability->add_option("--coders", coders, "Two item<TAB>label files")
      ->required()
      ->expected(2);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      auto patterns = PatternSet::defaults();
      if (!patterns_file.empty()) patterns.load_file(patterns_file);
      auto repos = read_repo_list(repos_file);
      std::set<std::string> ids;
      for (const auto& r : repos)
        if (!ids.insert(r.id).second) throw IngestError("duplicate repository id: " + r.id);
      std::vector<CorpusRecord> records(repos.size());
      std::vector<std::vector<std::string>> warnings(repos.size());
      parallel_for(repos.size(), threads, [&](std::size_t i) {
        records[i] = ingest_repository(repos[i].path, repos[i].id, patterns, &warnings[i]);
      });
      for (const auto& w : warnings)
        for (const auto& line : w) std::cerr << "warning: " << line << '\n';
      std::sort(records.begin(), records.end(),
                [](const auto& a, const auto& b) { return a.repo_id < b.repo_id; });
      write_jsonl(corpus_out, records, corpus_record_to_json);
      std::size_t paired = 0;
      for (const auto& r : records) paired += r.status == PairStatus::paired;
      std::cerr << records.size() << " repositories, " << paired << " paired\n";
    } else if (*normalize) {
      const auto lexicons = load_lexicons(lexicon_dir);
      const auto corpus = read_corpus(in_path);
      write_jsonl(out_path, normalize_corpus(corpus, lexicons, threads), sentences_record_to_json);
    } else if (*parse) {
      const auto lexicons = load_lexicons(lexicon_dir);
      const auto snapshots = read_sentences(in_path);
      write_jsonl(out_path, parse_snapshots(snapshots, lexicons, threads),
                  statement_record_to_json);
    } else if (*label) {
      const auto lexicons = load_lexicons(lexicon_dir);
      const auto statements = read_statements(in_path);
      write_jsonl(out_path, label_statements(statements, lexicons), labeled_record_to_json);
    } else if (*metrics) {
      rc.validate();
      const auto pairs = group_pairs(read_labeled(in_path), rc.across_day_only);
      write_file(out_path, format_metrics_csv(compute_all_metrics(pairs, rc.metrics(), threads)));
    } else if (*infer) {
      rc.threads = threads;
      rc.validate();
      const auto rows = parse_metrics_csv(read_file(metrics_path));
      std::set<std::string> ids;
      for (const auto& m : rows) ids.insert(m.repo_id);
      std::vector<LabeledPair> pairs;
      for (auto& p : group_pairs(read_labeled(labeled_path)))
        if (ids.count(p.repo_id)) pairs.push_back(std::move(p));
      fs::create_directories(out_dir);
      write_inference(run_inference(rows, pairs, rc.bootstrap()), out_dir);
      emit_figure_data(pairs, rows, out_dir);
    } else if (*run) {
      RunConfig config = config_path.empty() ? RunConfig{} : load_run_config(config_path);
      if (app.get_option("--threads")->count() > 0 || config_path.empty()) config.threads = threads;
      const auto result = run_pipeline(config, corpus_path, out_dir);
      for (const auto& [k, v] : result.counts) std::cerr << k << ": " << v << '\n';
    } else if (*reliability) {
      const auto r = reliability_from_files(coders[0], coders[1], sample);
      std::cout << "items: " << r.n_items << '\n'
                << "labels: " << r.n_labels << '\n'
                << "percent_agreement: " << format_fixed(r.percent_agreement, 2) << '\n'
                << "cohens_kappa: " << format_fixed(r.cohens_kappa, 3) << '\n';
    }
  } catch (const StageError& e) {
    std::cerr << "govgram: stage " << e.stage() << " failed: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "govgram: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
