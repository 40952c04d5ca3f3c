#include "govgram/inference.hpp"

#include <algorithm>
#include <cmath>

#include "govgram/error.hpp"
#include "govgram/rng.hpp"
#include "govgram/text_util.hpp"

namespace govgram {

namespace {

// Mean taken relative to the first value, so a constant sample reproduces
// the constant exactly.
double shifted_mean(std::span<const double> values) {
  const double base = values.front();
  double sum = 0.0;
  for (const double v : values) sum += v - base;
  return base + sum / static_cast<double>(values.size());
}

}  // namespace

double nearest_rank(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InferenceError("quantile of an empty sample");
  const double n = static_cast<double>(sorted.size());
  // Tolerance absorbs representation error in p * n (0.025 * 10000).
  auto rank = static_cast<std::ptrdiff_t>(std::ceil(p * n - 1e-9));
  rank = std::clamp<std::ptrdiff_t>(rank, 1, static_cast<std::ptrdiff_t>(sorted.size()));
  return sorted[static_cast<std::size_t>(rank - 1)];
}

BootstrapResult bootstrap_mean(std::span<const double> values, const BootstrapConfig& config,
                               std::string estimand) {
  if (values.empty()) throw InferenceError("bootstrap of an empty sample: " + estimand);
  if (config.B == 0) throw InferenceError("bootstrap needs B >= 1");
  if (!(config.alpha > 0.0 && config.alpha < 1.0))
    throw InferenceError("alpha must lie in (0, 1)");

  BootstrapResult r;
  r.estimand = std::move(estimand);
  r.n_repos = values.size();
  r.B = config.B;
  r.alpha = config.alpha;
  r.seed = config.seed;
  r.mean = shifted_mean(values);

  const std::size_t n = values.size();
  const double base = values.front();
  std::vector<double> replicates(config.B);
  parallel_for(config.B, std::max(1u, config.threads), [&](std::size_t b) {
    Rng rng(derive_seed(config.seed, b));
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += values[rng.below(n)] - base;
    replicates[b] = base + sum / static_cast<double>(n);
  });
  std::sort(replicates.begin(), replicates.end());
  r.ci_low = nearest_rank(replicates, config.alpha / 2.0);
  r.ci_high = nearest_rank(replicates, 1.0 - config.alpha / 2.0);
  return r;
}

// ---------------------------------------------------------------------------

std::vector<RepoShares> repo_shares(std::span<const LabeledPair> pairs, Feature feature) {
  std::vector<RepoShares> out;
  for (const auto& pair : pairs) {
    const auto initial = feature_labels(pair.initial, feature);
    const auto latest = feature_labels(pair.latest, feature);
    if (initial.empty() || latest.empty()) continue;
    RepoShares shares;
    shares.repo_id = pair.repo_id;
    shares.initial = CategoryDistribution::from_labels(feature, initial).proportions();
    shares.latest = CategoryDistribution::from_labels(feature, latest).proportions();
    out.push_back(std::move(shares));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.repo_id < b.repo_id; });
  return out;
}

namespace {

double share_of(const std::map<std::string, double>& shares, const std::string& category) {
  const auto it = shares.find(category);
  return it == shares.end() ? 0.0 : it->second;
}

}  // namespace

ShareDelta delta_share(std::span<const RepoShares> repos, Feature feature,
                       const std::string& category, const BootstrapConfig& config) {
  const auto categories = feature_categories(feature);
  if (std::find(categories.begin(), categories.end(), category) == categories.end())
    throw InferenceError("category '" + category + "' is not in the " +
                         std::string(to_string(feature)) + " set");
  if (repos.empty()) throw InferenceError("share delta over zero repositories");

  std::vector<double> initial;
  std::vector<double> latest;
  std::vector<double> delta;
  for (const auto& r : repos) {
    const double a = share_of(r.initial, category) * 100.0;
    const double b = share_of(r.latest, category) * 100.0;
    initial.push_back(a);
    latest.push_back(b);
    delta.push_back(b - a);
  }
  ShareDelta d;
  d.feature = feature;
  d.category = category;
  d.initial_share_pct = shifted_mean(initial);
  d.latest_share_pct = shifted_mean(latest);
  d.ci = bootstrap_mean(delta, config,
                        "share_delta:" + std::string(to_string(feature)) + ":" + category);
  d.delta_pp = d.ci.mean;
  return d;
}

std::vector<ShareDelta> share_deltas(std::span<const RepoShares> repos, Feature feature,
                                     const BootstrapConfig& config) {
  std::vector<ShareDelta> out;
  if (repos.empty()) return out;
  for (const auto category : feature_categories(feature))
    out.push_back(delta_share(repos, feature, std::string(category), config));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<const RepoMetrics*> select(std::span<const RepoMetrics> metrics, Feature feature,
                                       bool RepoMetrics::*eligible) {
  std::vector<const RepoMetrics*> rows;
  for (const auto& m : metrics)
    if (m.feature == feature && m.*eligible) rows.push_back(&m);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto* a, const auto* b) { return a->repo_id < b->repo_id; });
  return rows;
}

template <typename Get>
std::vector<double> column(const std::vector<const RepoMetrics*>& rows, Get get) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto* m : rows) out.push_back(get(*m));
  return out;
}

std::string estimand_name(std::string_view stat, Feature feature) {
  return std::string(stat) + ":" + std::string(to_string(feature));
}

}  // namespace

CountSummary summarize_counts(std::span<const RepoMetrics> metrics, Feature feature,
                              const BootstrapConfig& config) {
  CountSummary s;
  s.feature = feature;
  const auto rows = select(metrics, feature, &RepoMetrics::eligible_K);
  s.n = rows.size();
  if (rows.empty()) return s;
  s.initial_K = shifted_mean(column(rows, [](const auto& m) { return double(m.K_initial); }));
  s.latest_K = shifted_mean(column(rows, [](const auto& m) { return double(m.K_latest); }));
  const auto dk = column(rows, [](const auto& m) { return double(m.delta_K); });
  const auto rk = column(rows, [](const auto& m) { return m.rarefied_delta_K.value_or(0.0); });
  s.insufficient_n = rows.size() < 2;
  if (s.insufficient_n) {
    s.delta_K = BootstrapResult{estimand_name("delta_K", feature), rows.size(), shifted_mean(dk)};
    s.rarefied_delta_K =
        BootstrapResult{estimand_name("rarefied_delta_K", feature), rows.size(), shifted_mean(rk)};
    return s;
  }
  s.delta_K = bootstrap_mean(dk, config, estimand_name("delta_K", feature));
  s.rarefied_delta_K = bootstrap_mean(rk, config, estimand_name("rarefied_delta_K", feature));
  return s;
}

EntropySummary summarize_entropy(std::span<const RepoMetrics> metrics, Feature feature,
                                 const BootstrapConfig& config) {
  EntropySummary s;
  s.feature = feature;
  const auto rows = select(metrics, feature, &RepoMetrics::eligible_H);
  s.n = rows.size();
  if (rows.empty()) return s;
  s.initial_H = shifted_mean(column(rows, [](const auto& m) { return m.H_initial.value(); }));
  s.latest_H = shifted_mean(column(rows, [](const auto& m) { return m.H_latest.value(); }));
  const auto dh = column(rows, [](const auto& m) { return m.delta_H.value(); });
  const auto js = column(rows, [](const auto& m) { return m.jsd.value(); });
  s.insufficient_n = rows.size() < 2;
  if (s.insufficient_n) {
    s.delta_H = BootstrapResult{estimand_name("delta_H", feature), rows.size(), shifted_mean(dh)};
    s.jsd = BootstrapResult{estimand_name("jsd", feature), rows.size(), shifted_mean(js)};
    return s;
  }
  s.delta_H = bootstrap_mean(dh, config, estimand_name("delta_H", feature));
  s.jsd = bootstrap_mean(js, config, estimand_name("jsd", feature));
  return s;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kInsufficient = "insufficient-n";

std::string number(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

std::string mean_of(const std::optional<BootstrapResult>& r) {
  return r ? format_double(r->mean) : "NA";
}

std::string ci_of(const std::optional<BootstrapResult>& r, bool insufficient) {
  if (insufficient || !r) return std::string(kInsufficient);
  return csv_field(format_ci(*r));
}

}  // namespace

std::string format_ci(const BootstrapResult& r) {
  return "[" + format_double(r.ci_low) + ", " + format_double(r.ci_high) + "]";
}

std::string format_summary_counts(std::span<const CountSummary> rows) {
  std::string out(kSummaryCountsHeader);
  out += '\n';
  for (const auto& s : rows) {
    out += std::string(to_string(s.feature)) + ',' + std::to_string(s.n) + ',' +
           number(s.initial_K) + ',' + number(s.latest_K) + ',' + mean_of(s.delta_K) + ',' +
           ci_of(s.delta_K, s.insufficient_n) + ',' + mean_of(s.rarefied_delta_K) + ',' +
           ci_of(s.rarefied_delta_K, s.insufficient_n) + '\n';
  }
  return out;
}

std::string format_summary_entropy(std::span<const EntropySummary> rows) {
  std::string out(kSummaryEntropyHeader);
  out += '\n';
  for (const auto& s : rows) {
    out += std::string(to_string(s.feature)) + ',' + std::to_string(s.n) + ',' +
           number(s.initial_H) + ',' + number(s.latest_H) + ',' + mean_of(s.delta_H) + ',' +
           ci_of(s.delta_H, s.insufficient_n) + ',' + mean_of(s.jsd) + ',' +
           ci_of(s.jsd, s.insufficient_n) + '\n';
  }
  return out;
}

std::string format_share_deltas(std::span<const ShareDelta> rows) {
  std::string out(kShareDeltasHeader);
  out += '\n';
  for (const auto& d : rows) {
    out += d.category + ',' + format_double(d.initial_share_pct) + ',' +
           format_double(d.latest_share_pct) + ',' + format_double(d.delta_pp) + ',' +
           ci_of(d.ci, d.ci.n_repos < 2) + '\n';
  }
  return out;
}

}  // namespace govgram
