#include "fixtures.hpp"

#include <stdlib.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "govgram/process.hpp"
#include "govgram/records.hpp"
#include "govgram/rng.hpp"
#include "govgram/text_util.hpp"

namespace govgram::testing {

namespace fs = std::filesystem;

namespace {

// One subject surface per role category, in kRoleCategoryNames order.
constexpr std::array<std::string_view, 20> kRoleSurfaces = {
    "Everyone",           "Contributors",        "The maintainers",     "Users",
    "The core team",      "The technical committee", "The working groups", "The project",
    "Downstream projects", "The advisory board", "Meeting organizers",  "The steering committee",
    "The release managers", "Sponsors",          "Candidates",          "The project lead",
    "Reviewers",          "The chairs",          "Emeritus members",    "Bots",
};

struct ActionTemplates {
  std::array<std::string_view, 3> active;   // verb + object after a modal
  std::array<std::string_view, 2> passive;  // complete role-less sentences
};

// Non-constitutive categories: aggregation, position, information, choice,
// authority, payoff (indices into kActionCategoryNames).
constexpr std::array<std::size_t, 6> kPlantable = {0, 1, 2, 3, 5, 6};

const ActionTemplates& templates_for(std::size_t category) {
  static const std::array<ActionTemplates, 7> kTemplates = {{
      {{"discuss the roadmap", "coordinate the releases", "debate the proposals"},
       {"Proposals must be discussed.", "Release plans should be coordinated."}},
      {{"elect the chair", "appoint the secretary", "nominate the candidates"},
       {"Seats may be rotated.", "New board members must be elected."}},
      {{"review the changes", "publish the minutes", "announce the releases"},
       {"Changes must be documented.", "Decisions must be recorded."}},
      {{"merge the pull requests", "fix the bugs", "create the branches"},
       {"Pull requests must be merged.", "Patches should be submitted."}},
      {{"", "", ""}, {"", ""}},
      {{"approve the changes", "ratify the roadmap", "manage the budget"},
       {"Releases must be approved.", "The roadmap must be ratified."}},
      {{"fund the infrastructure", "reimburse the travel", "pay the fees"},
       {"Travel costs may be reimbursed.", "The infrastructure must be funded."}},
  }};
  return kTemplates[category];
}

constexpr std::array<std::string_view, 8> kModals = {"must", "should", "may",      "can",
                                                     "will", "shall",  "must not", "cannot"};

struct Statement {
  std::size_t role;  // kRoleSurfaces index
  std::size_t action;
};

std::string render(const std::vector<Statement>& statements,
                   const std::vector<std::string>& passives, Rng& rng) {
  std::vector<std::string> sentences;
  for (const auto& st : statements) {
    const auto& t = templates_for(st.action);
    std::string subject(kRoleSurfaces[st.role]);
    if (rng.below(5) == 0 && subject.starts_with("The ")) {
      subject = "The **" + subject.substr(4) + "**";
    }
    std::string predicate(t.active[rng.below(t.active.size())]);
    if (rng.below(6) == 0) {
      const auto space = predicate.rfind(' ');
      predicate = predicate.substr(0, space + 1) + "[" + predicate.substr(space + 1) +
                  "](https://example.org/" + std::to_string(rng.below(1000)) + ")";
    }
    sentences.push_back(subject + " " + std::string(kModals[rng.below(kModals.size())]) + " " +
                        predicate + ".");
  }
  for (const auto& p : passives) sentences.insert(sentences.begin() + rng.below(sentences.size() + 1), p);

  std::string doc = "# Governance\n\n";
  const std::size_t list_part = rng.below(sentences.size() + 1);
  if (list_part > 0) doc += "## Responsibilities\n\n";
  for (std::size_t i = 0; i < list_part; ++i) doc += "- " + sentences[i] + "\n";
  if (list_part < sentences.size()) {
    doc += "\n## Process\n\n";
    for (std::size_t i = list_part; i < sentences.size(); ++i) {
      doc += sentences[i];
      doc += (i + 1 - list_part) % 3 == 0 ? "\n\n" : " ";
    }
    doc += "\n";
  }
  return doc;
}

// Statements over `roles` with the given counts; actions cycle through `actions`.
std::vector<Statement> statements_for(const std::vector<std::size_t>& roles,
                                      const std::vector<std::size_t>& counts,
                                      const std::vector<std::size_t>& actions) {
  std::vector<Statement> out;
  for (std::size_t r = 0; r < roles.size(); ++r)
    for (std::size_t c = 0; c < counts[r]; ++c) out.push_back({roles[r], 0});
  for (std::size_t j = 0; j < out.size(); ++j) out[j].action = actions[j % actions.size()];
  return out;
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

}  // namespace

PlantedCorpus make_planted_corpus(const PlantedSpec& spec) {
  if (spec.action_plants > spec.n_repos || spec.role_plants > spec.n_repos)
    throw std::invalid_argument("more plants than repositories");
  Rng rng(spec.seed);
  std::vector<bool> action_plant(spec.n_repos, false);
  std::vector<bool> role_plant(spec.n_repos, false);
  std::fill_n(action_plant.begin(), spec.action_plants, true);
  std::fill_n(role_plant.begin(), spec.role_plants, true);
  shuffle(action_plant, rng);
  shuffle(role_plant, rng);

  PlantedCorpus corpus;
  double delta_h_sum = 0.0;
  for (std::size_t i = 0; i < spec.n_repos; ++i) {
    std::vector<std::size_t> role_pool(20);
    for (std::size_t k = 0; k < 20; ++k) role_pool[k] = k;
    shuffle(role_pool, rng);
    std::vector<std::size_t> action_pool(kPlantable.begin(), kPlantable.end());
    shuffle(action_pool, rng);
    const std::vector<std::size_t> actions(action_pool.begin(), action_pool.begin() + 3);
    const std::size_t unused_a = action_pool[3];
    const std::size_t unused_b = action_pool[4];

    std::vector<Statement> initial;
    std::vector<Statement> latest;
    if (role_plant[i]) {
      const std::vector<std::size_t> four(role_pool.begin(), role_pool.begin() + 4);
      const std::vector<std::size_t> five(role_pool.begin(), role_pool.begin() + 5);
      initial = statements_for(four, {2, 2, 2, 2}, actions);
      latest = statements_for(five, {2, 2, 2, 2, 2}, actions);
      delta_h_sum += std::log2(5.0) - 2.0;
    } else {
      const std::size_t m = 3 + rng.below(3);
      const std::vector<std::size_t> roles(role_pool.begin(), role_pool.begin() + m);
      std::vector<std::size_t> counts(m);
      for (auto& c : counts) c = 2 + rng.below(2);
      initial = statements_for(roles, counts, actions);
      shuffle(counts, rng);  // same multiset of counts, so entropy is unchanged
      latest = statements_for(roles, counts, actions);
    }
    shuffle(initial, rng);
    shuffle(latest, rng);

    std::vector<std::string> latest_passives;
    const auto& plant = templates_for(unused_a).passive;
    if (action_plant[i]) {
      latest_passives = {std::string(plant[0]), std::string(plant[1])};
    } else {
      // One mention stays below the presence threshold.
      latest_passives = {std::string(plant[rng.below(2)])};
    }
    // A noise category mentioned at most once per snapshot never reaches tau.
    std::vector<std::string> initial_passives;
    const auto& noise = templates_for(unused_b).passive;
    if (rng.below(2) == 0) initial_passives.emplace_back(noise[rng.below(2)]);
    if (rng.below(2) == 0) latest_passives.emplace_back(noise[rng.below(2)]);

    CorpusRecord r;
    char id[32];
    std::snprintf(id, sizeof id, "org%03zu/repo%03zu", i % 17, i);
    r.repo_id = id;
    r.status = PairStatus::paired;
    const std::int64_t t0 = 1420070400 + static_cast<std::int64_t>(rng.below(1500)) * 86400 +
                            static_cast<std::int64_t>(rng.below(40000));
    const bool across = rng.below(100) < 45;
    const std::int64_t t1 =
        across ? t0 + static_cast<std::int64_t>(1 + rng.below(1800)) * 86400 : t0 + 60;
    r.initial = SnapshotVersion{"a" + std::to_string(i), t0, render(initial, initial_passives, rng)};
    r.latest = SnapshotVersion{"b" + std::to_string(i), t1, render(latest, latest_passives, rng)};
    r.gap_days = utc_day_gap(t0, t1);
    r.across_day = r.gap_days > 0;
    r.n_commits = 2 + rng.below(5);
    if (r.across_day) ++corpus.n_across_day;
    corpus.records.push_back(std::move(r));
  }
  corpus.planted_delta_k_actions =
      static_cast<double>(spec.action_plants) / static_cast<double>(spec.n_repos);
  corpus.planted_delta_h_roles = delta_h_sum / static_cast<double>(spec.n_repos);
  return corpus;
}

std::string corpus_jsonl(const std::vector<CorpusRecord>& records) {
  std::string out;
  for (const auto& r : records) out += corpus_record_to_json(r) + "\n";
  return out;
}

// ---------------------------------------------------------------------------

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "govgram-test-XXXXXX").string();
  if (mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

GitRepo::GitRepo(const std::string& path) : path_(path) {
  fs::create_directories(path_);
  git({"init", "-q"});
}

void GitRepo::write(const std::string& relative, const std::string& content) const {
  const auto full = fs::path(path_) / relative;
  fs::create_directories(full.parent_path());
  write_file(full.string(), content);
}

void GitRepo::remove(const std::string& relative) const { fs::remove(fs::path(path_) / relative); }

std::string GitRepo::commit(std::int64_t time, const std::string& message) const {
  const std::string date = "@" + std::to_string(time) + " +0000";
  setenv("GIT_COMMITTER_DATE", date.c_str(), 1);
  setenv("GIT_AUTHOR_DATE", date.c_str(), 1);
  git({"add", "-A"});
  git({"-c", "user.name=Test", "-c", "user.email=test@example.org", "commit", "-q",
       "--allow-empty", "-m", message});
  unsetenv("GIT_COMMITTER_DATE");
  unsetenv("GIT_AUTHOR_DATE");
  const auto head = run_process({"git", "-C", path_, "rev-parse", "HEAD"});
  return std::string(trim(head.out));
}

void GitRepo::git(const std::vector<std::string>& args) const {
  std::vector<std::string> argv = {"git", "-C", path_};
  argv.insert(argv.end(), args.begin(), args.end());
  const auto r = run_process(argv);
  if (r.exit_code != 0) throw std::runtime_error("git command failed in " + path_);
}

}  // namespace govgram::testing
