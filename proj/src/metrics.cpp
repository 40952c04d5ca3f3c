#include "govgram/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "govgram/error.hpp"
#include "govgram/rng.hpp"
#include "govgram/text_util.hpp"

namespace govgram {

std::string_view to_string(Feature f) noexcept { return kFeatureNames[static_cast<std::size_t>(f)]; }

std::optional<Feature> parse_feature(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kFeatureNames.size(); ++i)
    if (kFeatureNames[i] == name) return static_cast<Feature>(i);
  return std::nullopt;
}

std::span<const std::string_view> feature_categories(Feature f) noexcept {
  switch (f) {
    case Feature::roles:
      return kRoleCategoryNames;
    case Feature::actions:
      return kActionCategoryNames;
    case Feature::deontics:
      return kDeonticStrengthNames;
    case Feature::deontics_binary:
      return kDeonticPolarityNames;
  }
  return {};
}

std::optional<std::string_view> feature_label(const LabeledStatement& s, Feature feature) {
  switch (feature) {
    case Feature::roles:
      if (s.role_category) return to_string(*s.role_category);
      break;
    case Feature::actions:
      if (s.action_category) return to_string(*s.action_category);
      break;
    case Feature::deontics:
      if (s.deontic_strength) return to_string(*s.deontic_strength);
      break;
    case Feature::deontics_binary:
      if (s.deontic_polarity) return to_string(*s.deontic_polarity);
      break;
  }
  return std::nullopt;
}

std::vector<std::string> feature_labels(std::span<const LabeledStatement> statements,
                                        Feature feature) {
  std::vector<std::string> out;
  for (const auto& s : statements)
    if (auto label = feature_label(s, feature)) out.emplace_back(*label);
  return out;
}

// ---------------------------------------------------------------------------

CategoryDistribution CategoryDistribution::from_labels(Feature feature,
                                                       std::span<const std::string> labels) {
  CategoryDistribution d;
  d.feature = feature;
  for (const auto& label : labels) d.add(label);
  return d;
}

CategoryDistribution CategoryDistribution::from_counts(Feature feature,
                                                       std::map<std::string, std::size_t> counts) {
  CategoryDistribution d;
  d.feature = feature;
  for (const auto& [k, c] : counts) d.n_labeled += c;
  d.counts = std::move(counts);
  return d;
}

void CategoryDistribution::add(const std::string& category, std::size_t count) {
  counts[category] += count;
  n_labeled += count;
}

std::map<std::string, double> CategoryDistribution::proportions() const {
  std::map<std::string, double> out;
  for (const auto& [k, c] : counts)
    out[k] = n_labeled == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(n_labeled);
  return out;
}

// ---------------------------------------------------------------------------

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (const double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h < 0.0 ? 0.0 : h;
}

double entropy(const CategoryDistribution& dist) {
  if (dist.n_labeled == 0) throw UndefinedMetricError("entropy of an empty distribution");
  std::vector<double> p;
  for (const auto& [k, c] : dist.counts)
    p.push_back(static_cast<double>(c) / static_cast<double>(dist.n_labeled));
  return entropy(p);
}

double jsd(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw UndefinedMetricError("jsd over unaligned distributions");
  double d = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double m = 0.5 * (p[k] + q[k]);
    double term_p = 0.0;
    double term_q = 0.0;
    if (p[k] > 0.0) term_p = p[k] * std::log2(p[k] / m);
    if (q[k] > 0.0) term_q = q[k] * std::log2(q[k] / m);
    d += 0.5 * (term_p + term_q);
  }
  return std::clamp(d, 0.0, 1.0);
}

double jsd(const CategoryDistribution& p, const CategoryDistribution& q) {
  if (p.n_labeled == 0 || q.n_labeled == 0)
    throw UndefinedMetricError("jsd with an empty distribution");
  std::map<std::string, std::pair<double, double>> aligned;
  for (const auto& [k, c] : p.counts)
    aligned[k].first = static_cast<double>(c) / static_cast<double>(p.n_labeled);
  for (const auto& [k, c] : q.counts)
    aligned[k].second = static_cast<double>(c) / static_cast<double>(q.n_labeled);
  std::vector<double> pv;
  std::vector<double> qv;
  for (const auto& [k, v] : aligned) {
    pv.push_back(v.first);
    qv.push_back(v.second);
  }
  return jsd(pv, qv);
}

std::size_t count_k(const CategoryDistribution& dist, std::size_t tau) {
  std::size_t k = 0;
  for (const auto& [cat, c] : dist.counts)
    if (c >= tau && c > 0) ++k;
  return k;
}

namespace {

std::size_t sample_k(std::vector<std::uint32_t>& pool, std::span<const double> uniforms,
                     std::vector<std::size_t>& counts, std::size_t tau) {
  std::fill(counts.begin(), counts.end(), 0);
  const std::size_t n = pool.size();
  std::size_t k = 0;
  for (std::size_t j = 0; j < uniforms.size(); ++j) {
    auto pick = j + static_cast<std::size_t>(uniforms[j] * static_cast<double>(n - j));
    if (pick >= n) pick = n - 1;
    std::swap(pool[j], pool[pick]);
    if (++counts[pool[j]] == tau) ++k;
  }
  return k;
}

}  // namespace

double rarefied_delta_k(std::span<const std::string> initial, std::span<const std::string> latest,
                        std::size_t draws, std::size_t cap, std::uint64_t seed, std::size_t tau) {
  if (initial.empty() || latest.empty())
    throw UndefinedMetricError("rarefied delta K needs statements in both snapshots");
  if (draws == 0) throw UndefinedMetricError("rarefied delta K needs at least one draw");
  if (tau == 0) tau = 1;

  std::unordered_map<std::string_view, std::uint32_t> ids;
  auto encode = [&](std::span<const std::string> labels) {
    std::vector<std::uint32_t> out;
    out.reserve(labels.size());
    for (const auto& l : labels) {
      auto [it, inserted] = ids.emplace(l, static_cast<std::uint32_t>(ids.size()));
      out.push_back(it->second);
    }
    return out;
  };
  const auto base_initial = encode(initial);
  const auto base_latest = encode(latest);
  const std::size_t n_r = std::min({initial.size(), latest.size(), cap});

  // Pools are reset each draw so a draw depends only on its uniforms.
  std::vector<std::uint32_t> pool_i;
  std::vector<std::uint32_t> pool_l;
  std::vector<std::size_t> counts(ids.size());
  std::vector<double> uniforms(n_r);
  Rng rng(seed);
  std::int64_t total = 0;
  for (std::size_t t = 0; t < draws; ++t) {
    for (auto& u : uniforms) u = rng.unit();
    pool_i = base_initial;
    pool_l = base_latest;
    const auto k_i = sample_k(pool_i, uniforms, counts, tau);
    const auto k_l = sample_k(pool_l, uniforms, counts, tau);
    total += static_cast<std::int64_t>(k_l) - static_cast<std::int64_t>(k_i);
  }
  return static_cast<double>(total) / static_cast<double>(draws);
}

// ---------------------------------------------------------------------------

std::uint64_t rarefaction_seed(std::uint64_t seed, std::string_view repo_id, Feature feature) {
  return derive_seed(derive_seed(seed, stable_hash(repo_id)), static_cast<std::uint64_t>(feature));
}

namespace {

double snapshot_entropy(const CategoryDistribution& d, bool normalize) {
  const double h = entropy(d);
  if (!normalize) return h;
  std::size_t support = 0;
  for (const auto& [k, c] : d.counts)
    if (c > 0) ++support;
  return support > 1 ? h / std::log2(static_cast<double>(support)) : 0.0;
}

}  // namespace

RepoMetrics compute_repo_metrics(const std::string& repo_id, std::span<const std::string> initial,
                                 std::span<const std::string> latest, Feature feature,
                                 const MetricsConfig& config) {
  RepoMetrics m;
  m.repo_id = repo_id;
  m.feature = feature;
  const auto d_initial = CategoryDistribution::from_labels(feature, initial);
  const auto d_latest = CategoryDistribution::from_labels(feature, latest);
  m.n_initial = d_initial.n_labeled;
  m.n_latest = d_latest.n_labeled;
  m.K_initial = count_k(d_initial, config.tau);
  m.K_latest = count_k(d_latest, config.tau);
  m.delta_K = static_cast<std::int64_t>(m.K_latest) - static_cast<std::int64_t>(m.K_initial);
  m.eligible_K = m.n_initial >= 1 && m.n_latest >= 1;
  m.eligible_H = m.n_initial >= config.min_labeled && m.n_latest >= config.min_labeled &&
                 m.eligible_K;
  if (m.eligible_K) {
    m.rarefied_delta_K =
        rarefied_delta_k(initial, latest, config.rarefaction_draws, config.rarefaction_cap,
                         rarefaction_seed(config.seed, repo_id, feature), config.tau);
  }
  if (m.eligible_H) {
    m.H_initial = snapshot_entropy(d_initial, config.normalize_entropy);
    m.H_latest = snapshot_entropy(d_latest, config.normalize_entropy);
    m.delta_H = *m.H_latest - *m.H_initial;
    m.jsd = jsd(d_initial, d_latest);
  }
  return m;
}

RepoMetrics compute_repo_metrics(const LabeledPair& pair, Feature feature,
                                 const MetricsConfig& config) {
  const auto initial = feature_labels(pair.initial, feature);
  const auto latest = feature_labels(pair.latest, feature);
  return compute_repo_metrics(pair.repo_id, initial, latest, feature, config);
}

std::vector<RepoMetrics> compute_all_metrics(std::span<const LabeledPair> pairs,
                                             const MetricsConfig& config, unsigned threads) {
  std::vector<const LabeledPair*> order;
  for (const auto& p : pairs) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto* a, const auto* b) { return a->repo_id < b->repo_id; });
  std::vector<RepoMetrics> out(order.size() * kFeatures.size());
  parallel_for(order.size(), threads, [&](std::size_t i) {
    for (std::size_t f = 0; f < kFeatures.size(); ++f)
      out[i * kFeatures.size() + f] = compute_repo_metrics(*order[i], kFeatures[f], config);
  });
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string opt_field(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

std::optional<double> parse_opt(const std::string& field) {
  if (field == "NA" || field.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw FormatError("trailing characters");
    return v;
  } catch (const std::logic_error&) {
    throw FormatError("invalid number '" + field + "' in metrics table");
  }
}

std::int64_t parse_int(const std::string& field) {
  try {
    std::size_t used = 0;
    const auto v = std::stoll(field, &used);
    if (used != field.size()) throw FormatError("trailing characters");
    return v;
  } catch (const std::logic_error&) {
    throw FormatError("invalid integer '" + field + "' in metrics table");
  }
}

bool parse_bool(const std::string& field) {
  if (field == "true") return true;
  if (field == "false") return false;
  throw FormatError("invalid boolean '" + field + "' in metrics table");
}

}  // namespace

std::string format_metrics_csv(std::span<const RepoMetrics> rows) {
  std::string out(kMetricsHeader);
  out += '\n';
  for (const auto& m : rows) {
    out += csv_field(m.repo_id);
    out += ',';
    out += to_string(m.feature);
    for (const auto* v : {&m.H_initial, &m.H_latest, &m.delta_H}) {
      out += ',';
      out += opt_field(*v);
    }
    out += ',' + std::to_string(m.K_initial);
    out += ',' + std::to_string(m.K_latest);
    out += ',' + std::to_string(m.delta_K);
    out += ',' + opt_field(m.rarefied_delta_K);
    out += ',' + opt_field(m.jsd);
    out += m.eligible_H ? ",true" : ",false";
    out += m.eligible_K ? ",true" : ",false";
    out += ',' + std::to_string(m.n_initial);
    out += ',' + std::to_string(m.n_latest);
    out += '\n';
  }
  return out;
}

std::vector<RepoMetrics> parse_metrics_csv(std::string_view content) {
  std::vector<RepoMetrics> rows;
  bool header = true;
  std::size_t line_no = 0;
  for (auto line : split(content, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      if (line != kMetricsHeader) throw FormatError("unexpected metrics header");
      header = false;
      continue;
    }
    const auto f = parse_csv_line(line);
    if (f.size() != 14)
      throw FormatError("metrics line " + std::to_string(line_no) + ": expected 14 fields");
    RepoMetrics m;
    m.repo_id = f[0];
    const auto feature = parse_feature(f[1]);
    if (!feature) throw FormatError("metrics line " + std::to_string(line_no) + ": bad feature");
    m.feature = *feature;
    m.H_initial = parse_opt(f[2]);
    m.H_latest = parse_opt(f[3]);
    m.delta_H = parse_opt(f[4]);
    m.eligible_H = parse_bool(f[10]);
    m.eligible_K = parse_bool(f[11]);
    m.K_initial = static_cast<std::size_t>(parse_int(f[5]));
    m.K_latest = static_cast<std::size_t>(parse_int(f[6]));
    m.delta_K = parse_int(f[7]);
    m.rarefied_delta_K = parse_opt(f[8]);
    m.jsd = parse_opt(f[9]);
    m.n_initial = static_cast<std::size_t>(parse_int(f[12]));
    m.n_latest = static_cast<std::size_t>(parse_int(f[13]));
    rows.push_back(std::move(m));
  }
  return rows;
}

}  // namespace govgram
