#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "govgram/metrics.hpp"

namespace govgram {

struct BootstrapConfig {
  std::size_t B = 10000;
  double alpha = 0.05;
  std::uint64_t seed = 17;
  unsigned threads = 1;
};

struct BootstrapResult {
  std::string estimand;
  std::size_t n_repos = 0;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t B = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
};

/// Equal-weight mean with a percentile interval over B replicate means, each
/// resampling n values with replacement. Replicate b draws from the stream
/// derive_seed(seed, b), so the result does not depend on the thread count.
/// Quantiles are nearest-rank. Throws InferenceError on empty input.
BootstrapResult bootstrap_mean(std::span<const double> values, const BootstrapConfig& config,
                               std::string estimand = {});

/// Nearest-rank quantile of sorted values: element ceil(p * n) - 1.
double nearest_rank(std::span<const double> sorted, double p);

/// Per-repository category proportions for both snapshots of one feature.
struct RepoShares {
  std::string repo_id;
  std::map<std::string, double> initial;
  std::map<std::string, double> latest;
};

/// Proportions for every pair with both snapshots labeled for `feature`,
/// ordered by repo id.
std::vector<RepoShares> repo_shares(std::span<const LabeledPair> pairs, Feature feature);

struct ShareDelta {
  Feature feature = Feature::roles;
  std::string category;
  double initial_share_pct = 0.0;
  double latest_share_pct = 0.0;
  double delta_pp = 0.0;
  BootstrapResult ci;
};

/// Repository-paired mean change in one category's share, in percentage
/// points. Throws InferenceError for a category outside the closed set or
/// when no repository is given.
ShareDelta delta_share(std::span<const RepoShares> repos, Feature feature,
                       const std::string& category, const BootstrapConfig& config);

/// One row per category of the feature's closed set, in canonical order.
std::vector<ShareDelta> share_deltas(std::span<const RepoShares> repos, Feature feature,
                                     const BootstrapConfig& config);

struct CountSummary {
  Feature feature = Feature::roles;
  std::size_t n = 0;
  std::optional<double> initial_K;
  std::optional<double> latest_K;
  std::optional<BootstrapResult> delta_K;
  std::optional<BootstrapResult> rarefied_delta_K;
  bool insufficient_n = true;
};

struct EntropySummary {
  Feature feature = Feature::roles;
  std::size_t n = 0;
  std::optional<double> initial_H;
  std::optional<double> latest_H;
  std::optional<BootstrapResult> delta_H;
  std::optional<BootstrapResult> jsd;
  bool insufficient_n = true;
};

/// Count estimands over repositories with eligible_K for the feature.
CountSummary summarize_counts(std::span<const RepoMetrics> metrics, Feature feature,
                              const BootstrapConfig& config);
/// Entropy estimands over repositories with eligible_H for the feature.
EntropySummary summarize_entropy(std::span<const RepoMetrics> metrics, Feature feature,
                                 const BootstrapConfig& config);

inline constexpr std::string_view kSummaryCountsHeader =
    "feature,n,initial_K,latest_K,delta_K_mean,delta_K_ci,rarefied_delta_K_mean,"
    "rarefied_delta_K_ci";
inline constexpr std::string_view kSummaryEntropyHeader =
    "feature,n,initial_H,latest_H,delta_H_mean,delta_H_ci,jsd_mean,jsd_ci";
inline constexpr std::string_view kShareDeltasHeader =
    "category,initial_pct,latest_pct,delta_pp,delta_pp_ci";

/// Features of the count table and of the entropy table.
inline constexpr std::array<Feature, 3> kCountFeatures = {Feature::roles, Feature::actions,
                                                          Feature::deontics};
inline constexpr std::array<Feature, 4> kEntropyFeatures = kFeatures;

std::string format_ci(const BootstrapResult& r);
std::string format_summary_counts(std::span<const CountSummary> rows);
std::string format_summary_entropy(std::span<const EntropySummary> rows);
std::string format_share_deltas(std::span<const ShareDelta> rows);

}  // namespace govgram
