#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace govgram {

// Closed governance taxonomies. Enumerator order is the canonical output order.

enum class RoleCategory : std::uint8_t {
  all_project,
  contributors,
  maintainers,
  all_community,
  core_team,
  technical_committee,
  subcommittee,
  the_project,
  ecosystem,
  oversight,
  meeting_makers,
  steering,
  misc,
  outside,
  candidate,
  project_lead,
  reviewers,
  chairs,
  respected_members,
  github,
};

enum class ActionCategory : std::uint8_t {
  aggregation,
  position,
  information,
  choice,
  constitutive,
  authority,
  payoff,
};

inline constexpr std::array<std::string_view, 20> kRoleCategoryNames = {
    "all_project",   "contributors",   "maintainers",  "all_community",
    "core_team",     "technical_committee", "subcommittee", "the_project",
    "ecosystem",     "oversight",      "meeting_makers", "steering",
    "misc",          "outside",        "candidate",    "project_lead",
    "reviewers",     "chairs",         "respected_members", "github",
};

inline constexpr std::array<std::string_view, 7> kActionCategoryNames = {
    "aggregation", "position", "information", "choice",
    "constitutive", "authority", "payoff",
};

std::string_view to_string(RoleCategory c) noexcept;
std::string_view to_string(ActionCategory c) noexcept;
std::optional<RoleCategory> parse_role_category(std::string_view name) noexcept;
std::optional<ActionCategory> parse_action_category(std::string_view name) noexcept;

struct ContextCue {
  std::vector<std::string> words;
  std::string category;
};

struct LexiconEntry {
  std::string surface;
  std::vector<std::string> words;  // lowercase surface tokens
  std::string category;
  std::vector<ContextCue> cues;
  std::size_t order = 0;  // position in the lexicon file
};

struct LexiconMatch {
  const LexiconEntry* entry = nullptr;
  std::size_t first_word = 0;  // index into the matched word sequence
  std::size_t word_count = 0;
};

/// Line-oriented surface -> category table:
///   surface<TAB>category[<TAB>keyword=category ...]
/// Blank lines and lines starting with '#' are ignored. Matching is
/// case-insensitive on word tokens, longest entry first, ties broken by file
/// order.
class Lexicon {
 public:
  Lexicon() = default;

  /// Throws FormatError on a malformed line or a category outside `allowed`.
  static Lexicon parse(std::string_view content, std::string_view source,
                       std::span<const std::string_view> allowed);
  static Lexicon load(const std::string& path, std::span<const std::string_view> allowed);

  /// Longest entry occurring anywhere in `words`.
  std::optional<LexiconMatch> longest_match(std::span<const std::string> words) const;

  /// All non-overlapping matches scanning left to right, longest first at
  /// each position.
  std::vector<LexiconMatch> all_matches(std::span<const std::string> words) const;

  /// Entries whose surface is exactly `words`.
  const LexiconEntry* exact(std::span<const std::string> words) const;

  const std::vector<LexiconEntry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }
  const std::string& checksum() const noexcept { return checksum_; }

 private:
  std::optional<LexiconMatch> match_at(std::span<const std::string> words,
                                       std::size_t pos) const;

  std::vector<LexiconEntry> entries_;
  std::string checksum_;
};

struct TaxonomyLexicons {
  Lexicon roles;
  Lexicon actions;

  /// Loads roles.tsv and actions.tsv from `dir`.
  static TaxonomyLexicons load(const std::string& dir);
  /// Lexicons shipped with the source tree.
  static TaxonomyLexicons load_default();
};

std::string default_lexicon_dir();

/// Lowercase word tokens of a phrase (punctuation dropped).
std::vector<std::string> phrase_words(std::string_view phrase);

/// Agent test for a noun phrase whose first word may be clause-initial:
/// the head noun is plural or collective, or the phrase names a proper noun.
/// Known inanimate heads ("document", "decisions") are rejected.
bool is_agent_phrase(std::string_view phrase);

/// Category of the longest lexicon entry in `role_text`; agent phrases with
/// no lexicon hit fall back to misc; anything else is absent.
std::optional<RoleCategory> normalize_role(std::string_view role_text, const Lexicon& lexicon);

/// Lemma lookup with context disambiguation. Multi-word entries ("step
/// down") match when their remaining words follow in `sentence_context`.
std::optional<ActionCategory> categorize_action(std::string_view action_lemma,
                                                std::string_view sentence_context,
                                                const Lexicon& lexicon);

}  // namespace govgram
