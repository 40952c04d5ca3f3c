#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "govgram/labeling.hpp"

namespace govgram {

enum class Feature : std::uint8_t { roles, actions, deontics, deontics_binary };

inline constexpr std::array<Feature, 4> kFeatures = {Feature::roles, Feature::actions,
                                                     Feature::deontics, Feature::deontics_binary};
inline constexpr std::array<std::string_view, 4> kFeatureNames = {"roles", "actions", "deontics",
                                                                  "deontics_binary"};

std::string_view to_string(Feature f) noexcept;
std::optional<Feature> parse_feature(std::string_view name) noexcept;

/// Closed category set of a feature, in canonical order.
std::span<const std::string_view> feature_categories(Feature f) noexcept;

/// The statement's category for `feature`, if it was labeled for it.
std::optional<std::string_view> feature_label(const LabeledStatement& s, Feature feature);

/// Labels of every statement labeled for `feature`, in input order.
std::vector<std::string> feature_labels(std::span<const LabeledStatement> statements,
                                        Feature feature);

struct CategoryDistribution {
  Feature feature = Feature::roles;
  std::map<std::string, std::size_t> counts;
  std::size_t n_labeled = 0;

  static CategoryDistribution from_labels(Feature feature, std::span<const std::string> labels);
  /// Builds a distribution from counts; zero counts are kept as explicit entries.
  static CategoryDistribution from_counts(Feature feature,
                                          std::map<std::string, std::size_t> counts);

  void add(const std::string& category, std::size_t count = 1);
  std::map<std::string, double> proportions() const;
};

/// Shannon entropy in bits. Throws UndefinedMetricError on an empty distribution.
double entropy(const CategoryDistribution& dist);
/// Entropy of a probability vector; zero entries contribute nothing.
double entropy(std::span<const double> p);

/// Base-2 Jensen-Shannon divergence of two aligned probability vectors.
double jsd(std::span<const double> p, std::span<const double> q);
/// Aligns both distributions over the union of their categories.
/// Throws UndefinedMetricError when either is empty.
double jsd(const CategoryDistribution& p, const CategoryDistribution& q);

/// Number of categories with at least `tau` statements.
std::size_t count_k(const CategoryDistribution& dist, std::size_t tau = 2);

/// Mean paired difference K(latest sample) - K(initial sample) over `draws`
/// equal-size samples without replacement, n = min(N_initial, N_latest, cap).
/// Both samples of a draw consume the same uniform stream, so identical lists
/// give exactly zero. Throws UndefinedMetricError when a list is empty.
double rarefied_delta_k(std::span<const std::string> initial, std::span<const std::string> latest,
                        std::size_t draws, std::size_t cap, std::uint64_t seed,
                        std::size_t tau = 2);

struct MetricsConfig {
  std::size_t tau = 2;
  std::size_t rarefaction_cap = 100;
  std::size_t rarefaction_draws = 200;
  std::size_t min_labeled = 5;
  std::uint64_t seed = 17;
  bool normalize_entropy = false;
};

struct RepoMetrics {
  std::string repo_id;
  Feature feature = Feature::roles;
  std::optional<double> H_initial;
  std::optional<double> H_latest;
  std::optional<double> delta_H;
  std::size_t K_initial = 0;
  std::size_t K_latest = 0;
  std::int64_t delta_K = 0;
  std::optional<double> rarefied_delta_K;
  std::optional<double> jsd;
  bool eligible_H = false;  // >= min_labeled statements in both snapshots
  bool eligible_K = false;  // >= 1 statement in both snapshots
  std::size_t n_initial = 0;
  std::size_t n_latest = 0;
};

/// Labeled statements of one paired repository.
struct LabeledPair {
  std::string repo_id;
  bool across_day = false;
  std::vector<LabeledStatement> initial;
  std::vector<LabeledStatement> latest;
};

/// Seed of the rarefaction stream for one repository and feature.
std::uint64_t rarefaction_seed(std::uint64_t seed, std::string_view repo_id, Feature feature);

RepoMetrics compute_repo_metrics(const std::string& repo_id, std::span<const std::string> initial,
                                 std::span<const std::string> latest, Feature feature,
                                 const MetricsConfig& config);
RepoMetrics compute_repo_metrics(const LabeledPair& pair, Feature feature,
                                 const MetricsConfig& config);

/// All features for all pairs, ordered by repo id then feature.
std::vector<RepoMetrics> compute_all_metrics(std::span<const LabeledPair> pairs,
                                             const MetricsConfig& config, unsigned threads = 1);

inline constexpr std::string_view kMetricsHeader =
    "repo_id,feature,H_initial,H_latest,delta_H,K_initial,K_latest,delta_K,rarefied_delta_K,jsd,"
    "eligible_H,eligible_K,n_initial,n_latest";

/// Ineligible values are written as NA.
std::string format_metrics_csv(std::span<const RepoMetrics> rows);
std::vector<RepoMetrics> parse_metrics_csv(std::string_view content);

}  // namespace govgram
