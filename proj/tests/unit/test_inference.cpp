#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "govgram/error.hpp"
#include "govgram/inference.hpp"
#include "govgram/rng.hpp"
#include "oracles.hpp"

using namespace govgram;
namespace oracle = govgram::testing;

namespace {

BootstrapConfig cfg(std::size_t B = 2000, double alpha = 0.05, std::uint64_t seed = 17) {
  BootstrapConfig c;
  c.B = B;
  c.alpha = alpha;
  c.seed = seed;
  return c;
}

LabeledStatement action(ActionCategory a) {
  LabeledStatement s;
  s.action_category = a;
  return s;
}

}  // namespace

TEST_CASE("nearest rank quantile") {
  const std::vector<double> v = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK(nearest_rank(v, 0.025) == 1);
  CHECK(nearest_rank(v, 0.5) == 5);
  CHECK(nearest_rank(v, 0.975) == 10);
  CHECK(nearest_rank(v, 0.3) == 3);
  CHECK(nearest_rank(v, 1.0) == 10);
}

TEST_CASE("constant input gives a zero-width interval") {
  const std::vector<double> v(40, 0.37);
  const auto r = bootstrap_mean(v, cfg(), "x");
  CHECK(r.mean == 0.37);
  CHECK(r.ci_low == 0.37);
  CHECK(r.ci_high == 0.37);
  CHECK(r.n_repos == 40);
  CHECK(r.estimand == "x");
}

TEST_CASE("binary sample has an interval inside [0, 1] around the mean") {
  std::vector<double> v;
  for (int i = 0; i < 100; ++i) v.push_back(i % 2);
  const auto r = bootstrap_mean(v, cfg(4000));
  CHECK(r.mean == doctest::Approx(0.5));
  CHECK(r.ci_low >= 0.0);
  CHECK(r.ci_high <= 1.0);
  CHECK(r.ci_low < 0.5);
  CHECK(r.ci_high > 0.5);
  // Normal approximation: half-width 1.96 * 0.05 = 0.098.
  CHECK(r.ci_high - r.ci_low == doctest::Approx(0.196).epsilon(0.1));
}

TEST_CASE("replicate distribution matches exhaustive enumeration") {
  const std::vector<double> v = {0.0, 1.0, 3.0, 4.0, 10.0};
  const auto exact = oracle::oracle_replicate_distribution(v);
  // Exact quantiles from the enumerated distribution.
  const auto quantile = [&](double p) {
    double acc = 0;
    for (const auto& [x, w] : exact) {
      acc += w;
      if (acc >= p - 1e-12) return x;
    }
    return exact.rbegin()->first;
  };
  const auto r = bootstrap_mean(v, cfg(20000, 0.10));
  CHECK(r.mean == doctest::Approx(3.6));
  // Monte Carlo quantiles land on or next to the exact atoms.
  CHECK(std::abs(r.ci_low - quantile(0.05)) <= 0.41);
  CHECK(std::abs(r.ci_high - quantile(0.95)) <= 0.41);
}

TEST_CASE("duplicating the sample keeps the mean and narrows the interval") {
  Rng rng(2);
  std::vector<double> v;
  for (int i = 0; i < 30; ++i) v.push_back(rng.unit());
  std::vector<double> twice = v;
  twice.insert(twice.end(), v.begin(), v.end());
  const auto a = bootstrap_mean(v, cfg(4000));
  const auto b = bootstrap_mean(twice, cfg(4000));
  CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-12));
  CHECK(b.ci_high - b.ci_low < a.ci_high - a.ci_low);
}

TEST_CASE("smaller alpha widens the interval") {
  Rng rng(5);
  std::vector<double> v;
  for (int i = 0; i < 50; ++i) v.push_back(rng.unit() * 3.0);
  const auto r10 = bootstrap_mean(v, cfg(3000, 0.10));
  const auto r05 = bootstrap_mean(v, cfg(3000, 0.05));
  const auto r01 = bootstrap_mean(v, cfg(3000, 0.01));
  CHECK(r01.ci_low <= r05.ci_low);
  CHECK(r05.ci_low <= r10.ci_low);
  CHECK(r01.ci_high >= r05.ci_high);
  CHECK(r05.ci_high >= r10.ci_high);
}

TEST_CASE("bootstrap is reproducible and thread independent") {
  Rng rng(9);
  std::vector<double> v;
  for (int i = 0; i < 77; ++i) v.push_back(rng.unit());
  auto c1 = cfg(3000);
  auto c4 = cfg(3000);
  c4.threads = 4;
  const auto a = bootstrap_mean(v, c1);
  const auto b = bootstrap_mean(v, c4);
  CHECK(a.ci_low == b.ci_low);
  CHECK(a.ci_high == b.ci_high);
  CHECK(bootstrap_mean(v, cfg(3000, 0.05, 18)).ci_low != a.ci_low);
}

TEST_CASE("bootstrap rejects bad input") {
  const std::vector<double> empty;
  CHECK_THROWS_AS(bootstrap_mean(empty, cfg()), InferenceError);
  const std::vector<double> v = {1, 2};
  CHECK_THROWS_AS(bootstrap_mean(v, cfg(0)), InferenceError);
  CHECK_THROWS_AS(bootstrap_mean(v, cfg(100, 0.0)), InferenceError);
  CHECK_THROWS_AS(bootstrap_mean(v, cfg(100, 1.0)), InferenceError);
}

TEST_CASE("repo shares require labels in both snapshots") {
  std::vector<LabeledPair> pairs(3);
  pairs[0].repo_id = "b";
  pairs[0].initial = {action(ActionCategory::choice), action(ActionCategory::payoff)};
  pairs[0].latest = {action(ActionCategory::choice)};
  pairs[1].repo_id = "a";
  pairs[1].initial = {action(ActionCategory::choice)};
  pairs[1].latest = {action(ActionCategory::authority), action(ActionCategory::authority),
                     action(ActionCategory::choice), action(ActionCategory::position)};
  pairs[2].repo_id = "c";
  pairs[2].initial = {action(ActionCategory::choice)};
  const auto s = repo_shares(pairs, Feature::actions);
  REQUIRE(s.size() == 2);
  CHECK(s[0].repo_id == "a");
  CHECK(s[0].latest.at("authority") == doctest::Approx(0.5));
  CHECK(s[1].initial.at("payoff") == doctest::Approx(0.5));
  CHECK(repo_shares(pairs, Feature::roles).empty());
}

TEST_CASE("share deltas sum to zero and follow canonical order") {
  Rng rng(12);
  std::vector<LabeledPair> pairs(25);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    pairs[i].repo_id = "r" + std::to_string(i);
    const auto n_i = 1 + rng.below(8);
    const auto n_l = 1 + rng.below(8);
    for (std::size_t k = 0; k < n_i; ++k)
      pairs[i].initial.push_back(action(static_cast<ActionCategory>(rng.below(7))));
    for (std::size_t k = 0; k < n_l; ++k)
      pairs[i].latest.push_back(action(static_cast<ActionCategory>(rng.below(7))));
  }
  const auto shares = repo_shares(pairs, Feature::actions);
  const auto rows = share_deltas(shares, Feature::actions, cfg(500));
  REQUIRE(rows.size() == 7);
  double total = 0;
  double initial_total = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].category == kActionCategoryNames[k]);
    CHECK(rows[k].delta_pp == doctest::Approx(rows[k].latest_share_pct - rows[k].initial_share_pct));
    CHECK(rows[k].ci.ci_low <= rows[k].delta_pp + 1e-9);
    CHECK(rows[k].ci.ci_high >= rows[k].delta_pp - 1e-9);
    total += rows[k].delta_pp;
    initial_total += rows[k].initial_share_pct;
  }
  CHECK(std::abs(total) < 1e-6);
  CHECK(initial_total == doctest::Approx(100.0));
}

TEST_CASE("delta share errors") {
  std::vector<RepoShares> shares(1);
  shares[0].repo_id = "r";
  shares[0].initial["choice"] = 1.0;
  shares[0].latest["payoff"] = 1.0;
  CHECK_THROWS_AS(delta_share(shares, Feature::actions, "wizardry", cfg(100)), InferenceError);
  const std::vector<RepoShares> none;
  CHECK_THROWS_AS(delta_share(none, Feature::actions, "choice", cfg(100)), InferenceError);
  CHECK(share_deltas(none, Feature::actions, cfg(100)).empty());
  const auto d = delta_share(shares, Feature::actions, "payoff", cfg(100));
  CHECK(d.delta_pp == doctest::Approx(100.0));
}

namespace {

RepoMetrics metric_row(const std::string& id, Feature f, std::int64_t dk, bool eligible_H,
                       double dh = 0.0) {
  RepoMetrics m;
  m.repo_id = id;
  m.feature = f;
  m.K_initial = 2;
  m.K_latest = static_cast<std::size_t>(2 + dk);
  m.delta_K = dk;
  m.rarefied_delta_K = static_cast<double>(dk) * 0.5;
  m.eligible_K = true;
  m.eligible_H = eligible_H;
  if (eligible_H) {
    m.H_initial = 1.0;
    m.H_latest = 1.0 + dh;
    m.delta_H = dh;
    m.jsd = 0.1;
  }
  return m;
}

}  // namespace

TEST_CASE("summaries use pairwise deletion per estimand") {
  std::vector<RepoMetrics> rows = {
      metric_row("a", Feature::roles, 1, true, 0.5),
      metric_row("b", Feature::roles, 0, false),
      metric_row("c", Feature::roles, 2, true, -0.1),
  };
  rows[1].eligible_K = true;
  const auto counts = summarize_counts(rows, Feature::roles, cfg(500));
  CHECK(counts.n == 3);
  CHECK(counts.delta_K->mean == doctest::Approx(1.0));
  CHECK(*counts.initial_K == doctest::Approx(2.0));
  CHECK_FALSE(counts.insufficient_n);
  const auto ent = summarize_entropy(rows, Feature::roles, cfg(500));
  CHECK(ent.n == 2);
  CHECK(ent.delta_H->mean == doctest::Approx(0.2));
  CHECK(ent.jsd->mean == doctest::Approx(0.1));
  CHECK(summarize_entropy(rows, Feature::actions, cfg(500)).n == 0);
}

TEST_CASE("a single repository keeps its mean without an interval") {
  const std::vector<RepoMetrics> rows = {metric_row("a", Feature::actions, 1, true, 0.3)};
  const auto c = summarize_counts(rows, Feature::actions, cfg(500));
  CHECK(c.n == 1);
  CHECK(c.insufficient_n);
  CHECK(c.delta_K->mean == 1.0);
  const auto text = format_summary_counts(std::vector<CountSummary>{c});
  CHECK(text.find("insufficient-n") != std::string::npos);
}

TEST_CASE("table formats") {
  const std::vector<RepoMetrics> rows = {metric_row("a", Feature::roles, 1, true, 0.5),
                                         metric_row("b", Feature::roles, 1, true, 0.5)};
  const std::vector<CountSummary> counts = {summarize_counts(rows, Feature::roles, cfg(200))};
  const auto csv = format_summary_counts(counts);
  CHECK(csv.substr(0, csv.find('\n')) == kSummaryCountsHeader);
  CHECK(csv.find("roles,2,2,3,1,\"[1, 1]\",0.5,\"[0.5, 0.5]\"") != std::string::npos);
  const std::vector<EntropySummary> ent = {summarize_entropy(rows, Feature::roles, cfg(200))};
  CHECK(format_summary_entropy(ent).substr(0, kSummaryEntropyHeader.size()) == kSummaryEntropyHeader);
  BootstrapResult r;
  r.ci_low = -0.25;
  r.ci_high = 1.5;
  CHECK(format_ci(r) == "[-0.25, 1.5]");
  const std::vector<ShareDelta> none;
  CHECK(format_share_deltas(none) == std::string(kShareDeltasHeader) + "\n");
}

TEST_CASE("two-point sample interval is [0, 1]") {
  // Replicate means are Binomial(2, .5) / 2: P(0) = P(1) = .25, so both tails hit the atoms.
  const std::vector<double> v = {0.0, 1.0};
  const auto exact = oracle::oracle_replicate_distribution(v);
  CHECK(exact.at(0.0) == doctest::Approx(0.25));
  CHECK(exact.at(0.5) == doctest::Approx(0.5));
  const auto r = bootstrap_mean(v, cfg(10000));
  CHECK(r.mean == 0.5);
  CHECK(r.ci_low == 0.0);
  CHECK(r.ci_high == 1.0);
}

TEST_CASE("planted entropy change is detected in most seeded runs") {
  // 200 repositories, delta H ~ N(0.09, 0.3).
  std::normal_distribution<double> noise(0.09, 0.3);
  int excludes = 0;
  const int runs = 200;
  for (int run = 0; run < runs; ++run) {
    std::mt19937_64 gen(derive_seed(555, static_cast<std::uint64_t>(run)));
    std::vector<double> v(200);
    for (auto& x : v) x = noise(gen);
    const auto r = bootstrap_mean(v, cfg(2000, 0.05, static_cast<std::uint64_t>(run)));
    if (r.ci_low > 0.0) ++excludes;
  }
  CHECK(excludes >= runs * 97 / 100);
}

TEST_CASE("identical snapshots give zero share change") {
  std::vector<RepoShares> shares(5);
  for (std::size_t i = 0; i < shares.size(); ++i) {
    shares[i].repo_id = "r" + std::to_string(i);
    shares[i].initial = {{"choice", 0.25 * static_cast<double>(i % 4)}, {"payoff", 1.0 - 0.25 * static_cast<double>(i % 4)}};
    shares[i].latest = shares[i].initial;
  }
  for (const auto& row : share_deltas(shares, Feature::actions, cfg(500))) {
    CHECK(row.delta_pp == 0.0);
    CHECK(row.ci.ci_low == 0.0);
    CHECK(row.ci.ci_high == 0.0);
  }
}

TEST_CASE("symmetric share changes cancel") {
  std::vector<RepoShares> shares(2);
  shares[0] = {"r1", {{"choice", 0.5}, {"payoff", 0.5}}, {{"choice", 1.0}}};
  shares[1] = {"r2", {{"choice", 0.5}, {"payoff", 0.5}}, {{"payoff", 1.0}}};
  const auto d = delta_share(shares, Feature::actions, "choice", cfg(4000));
  CHECK(d.delta_pp == 0.0);
  CHECK(d.initial_share_pct == doctest::Approx(50.0));
  CHECK(d.ci.ci_low == doctest::Approx(-50.0));
  CHECK(d.ci.ci_high == doctest::Approx(50.0));
}

TEST_CASE("planted oversight share change is recovered") {
  // 20 repositories of 100 role mentions; oversight gains 1 pp in 17 and 2 pp in 3,
  // a planted mean of +1.15 pp.
  std::vector<LabeledPair> pairs(20);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    pairs[i].repo_id = "r" + std::to_string(i);
    const std::size_t gain = i < 17 ? 1 : 2;
    const auto fill = [](std::vector<LabeledStatement>& v, std::size_t oversight) {
      for (std::size_t k = 0; k < 100; ++k) {
        LabeledStatement s;
        s.role_category = k < oversight ? RoleCategory::oversight : RoleCategory::maintainers;
        v.push_back(s);
      }
    };
    fill(pairs[i].initial, 2);
    fill(pairs[i].latest, 2 + gain);
  }
  const auto shares = repo_shares(pairs, Feature::roles);
  const auto d = delta_share(shares, Feature::roles, "oversight", cfg(2000));
  CHECK(std::abs(d.delta_pp - 1.15) < 0.05);
  CHECK(d.ci.ci_low <= 1.15);
  CHECK(d.ci.ci_high >= 1.15);
}

TEST_CASE("input order does not change summaries") {
  std::vector<RepoMetrics> rows;
  Rng rng(21);
  for (int i = 0; i < 30; ++i) {
    RepoMetrics m;
    m.repo_id = "r" + std::to_string(i);
    m.feature = Feature::actions;
    m.eligible_K = true;
    m.eligible_H = true;
    m.delta_K = static_cast<std::int64_t>(rng.below(5)) - 2;
    m.rarefied_delta_K = rng.unit();
    m.H_initial = rng.unit();
    m.H_latest = rng.unit();
    m.delta_H = *m.H_latest - *m.H_initial;
    m.jsd = rng.unit() * 0.5;
    rows.push_back(m);
  }
  auto reversed = rows;
  std::reverse(reversed.begin(), reversed.end());
  const std::vector<CountSummary> a = {summarize_counts(rows, Feature::actions, cfg(1000))};
  const std::vector<CountSummary> b = {summarize_counts(reversed, Feature::actions, cfg(1000))};
  CHECK(format_summary_counts(a) == format_summary_counts(b));
  const std::vector<EntropySummary> c = {summarize_entropy(rows, Feature::actions, cfg(1000))};
  const std::vector<EntropySummary> d = {summarize_entropy(reversed, Feature::actions, cfg(1000))};
  CHECK(format_summary_entropy(c) == format_summary_entropy(d));
}
