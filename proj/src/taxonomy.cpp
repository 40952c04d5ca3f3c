#include "govgram/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "govgram/error.hpp"
#include "govgram/text_util.hpp"

namespace govgram {

std::string_view to_string(RoleCategory c) noexcept {
  return kRoleCategoryNames[static_cast<std::size_t>(c)];
}

std::string_view to_string(ActionCategory c) noexcept {
  return kActionCategoryNames[static_cast<std::size_t>(c)];
}

std::optional<RoleCategory> parse_role_category(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kRoleCategoryNames.size(); ++i)
    if (kRoleCategoryNames[i] == name) return static_cast<RoleCategory>(i);
  return std::nullopt;
}

std::optional<ActionCategory> parse_action_category(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kActionCategoryNames.size(); ++i)
    if (kActionCategoryNames[i] == name) return static_cast<ActionCategory>(i);
  return std::nullopt;
}

std::vector<std::string> phrase_words(std::string_view phrase) {
  std::vector<std::string> words;
  for (auto& tok : tokenize(phrase))
    if (tok.is_word) words.push_back(std::move(tok.lower));
  return words;
}

namespace {

bool contains_sequence(std::span<const std::string> haystack,
                       std::span<const std::string> needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i)
    if (std::equal(needle.begin(), needle.end(), haystack.begin() + static_cast<long>(i)))
      return true;
  return false;
}

}  // namespace

Lexicon Lexicon::parse(std::string_view content, std::string_view source,
                       std::span<const std::string_view> allowed) {
  auto check_category = [&](std::string_view cat, std::size_t line_no) {
    if (std::find(allowed.begin(), allowed.end(), cat) == allowed.end())
      throw FormatError(std::string(source) + ":" + std::to_string(line_no) +
                        ": unknown category '" + std::string(cat) + "'");
  };

  Lexicon lex;
  lex.checksum_ = sha256_hex(content);
  std::size_t line_no = 0;
  for (auto raw_line : split(content, '\n')) {
    ++line_no;
    if (!raw_line.empty() && raw_line.back() == '\r') raw_line.remove_suffix(1);
    const auto line = trim(raw_line);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(raw_line, '\t');
    if (fields.size() < 2)
      throw FormatError(std::string(source) + ":" + std::to_string(line_no) +
                        ": expected surface<TAB>category");
    LexiconEntry entry;
    entry.surface = std::string(trim(fields[0]));
    entry.words = phrase_words(entry.surface);
    entry.category = std::string(trim(fields[1]));
    entry.order = lex.entries_.size();
    if (entry.words.empty())
      throw FormatError(std::string(source) + ":" + std::to_string(line_no) + ": empty surface");
    check_category(entry.category, line_no);
    for (std::size_t f = 2; f < fields.size(); ++f) {
      const auto cue_text = trim(fields[f]);
      if (cue_text.empty()) continue;
      const auto eq = cue_text.rfind('=');
      if (eq == std::string_view::npos)
        throw FormatError(std::string(source) + ":" + std::to_string(line_no) +
                          ": context cue must be keyword=category");
      ContextCue cue;
      cue.words = phrase_words(cue_text.substr(0, eq));
      cue.category = std::string(trim(cue_text.substr(eq + 1)));
      check_category(cue.category, line_no);
      if (cue.words.empty())
        throw FormatError(std::string(source) + ":" + std::to_string(line_no) +
                          ": empty context keyword");
      entry.cues.push_back(std::move(cue));
    }
    lex.entries_.push_back(std::move(entry));
  }
  return lex;
}

Lexicon Lexicon::load(const std::string& path, std::span<const std::string_view> allowed) {
  return parse(read_file(path), path, allowed);
}

std::optional<LexiconMatch> Lexicon::match_at(std::span<const std::string> words,
                                              std::size_t pos) const {
  std::optional<LexiconMatch> best;
  for (const auto& entry : entries_) {
    const auto n = entry.words.size();
    if (pos + n > words.size()) continue;
    if (!std::equal(entry.words.begin(), entry.words.end(),
                    words.begin() + static_cast<long>(pos)))
      continue;
    if (!best || entry.surface.size() > best->entry->surface.size())
      best = LexiconMatch{&entry, pos, n};
  }
  return best;
}

std::optional<LexiconMatch> Lexicon::longest_match(std::span<const std::string> words) const {
  std::optional<LexiconMatch> best;
  for (std::size_t pos = 0; pos < words.size(); ++pos) {
    auto m = match_at(words, pos);
    if (!m) continue;
    const bool longer = !best || m->entry->surface.size() > best->entry->surface.size();
    const bool tie_earlier_in_file = best &&
                                     m->entry->surface.size() == best->entry->surface.size() &&
                                     m->entry->order < best->entry->order;
    if (longer || tie_earlier_in_file) best = m;
  }
  return best;
}

std::vector<LexiconMatch> Lexicon::all_matches(std::span<const std::string> words) const {
  std::vector<LexiconMatch> out;
  std::size_t pos = 0;
  while (pos < words.size()) {
    if (auto m = match_at(words, pos)) {
      out.push_back(*m);
      pos += m->word_count;
    } else {
      ++pos;
    }
  }
  return out;
}

const LexiconEntry* Lexicon::exact(std::span<const std::string> words) const {
  for (const auto& entry : entries_)
    if (std::equal(entry.words.begin(), entry.words.end(), words.begin(), words.end()))
      return &entry;
  return nullptr;
}

std::string default_lexicon_dir() {
#ifdef GOVGRAM_DEFAULT_LEXICON_DIR
  return GOVGRAM_DEFAULT_LEXICON_DIR;
#else
  return "lexicon";
#endif
}

TaxonomyLexicons TaxonomyLexicons::load(const std::string& dir) {
  TaxonomyLexicons lex;
  lex.roles = Lexicon::load(dir + "/roles.tsv", kRoleCategoryNames);
  lex.actions = Lexicon::load(dir + "/actions.tsv", kActionCategoryNames);
  return lex;
}

TaxonomyLexicons TaxonomyLexicons::load_default() { return load(default_lexicon_dir()); }

namespace {

const std::unordered_set<std::string>& collective_nouns() {
  static const std::unordered_set<std::string> kNouns = {
      "committee", "team",   "board",   "council", "group",   "community",
      "foundation", "organization", "panel", "body", "staff", "everyone",
      "everybody", "anyone", "anybody", "someone", "somebody", "nobody",
      "person",    "individual", "member", "people", "party", "chair",
      "lead",      "leader", "owner",  "contributor", "maintainer", "reviewer",
      "committer", "author", "user",   "developer", "steward", "moderator",
      "secretary", "treasurer", "candidate", "nominee", "delegate", "representative",
      "manager",   "officer", "admin",  "administrator", "liaison", "sponsor",
      "founder",   "creator", "director", "president", "approver", "participant",
  };
  return kNouns;
}

// Plural or singular heads that are never agents.
const std::unordered_set<std::string>& inanimate_heads() {
  static const std::unordered_set<std::string> kNouns = {
      "document", "documents", "file", "files", "rule", "rules", "change", "changes",
      "decision", "decisions", "proposal", "proposals", "issue", "issues",
      "request", "requests", "process", "processes", "policy", "policies",
      "vote", "votes", "release", "releases", "feature", "features", "code",
      "patch", "patches", "commit", "commits", "discussion", "discussions",
      "election", "elections", "term", "terms", "seat", "seats", "nomination",
      "nominations", "review", "reviews", "approval", "approvals", "contribution",
      "contributions", "guideline", "guidelines", "section", "sections",
      "amendment", "amendments", "responsibility", "responsibilities", "role",
      "roles", "this", "that", "these", "those", "it", "there", "here",
      "governance", "details", "process", "meeting", "minutes", "notes",
      "agenda", "majority", "quorum", "consensus", "tie", "ties", "funds",
      "expenses", "budget", "license", "licenses", "trademark", "trademarks",
      "decisions", "questions", "bugs", "tests", "builds", "docs",
      "documentation", "version", "versions", "plans", "plan", "goals", "goal",
      "time", "times", "days", "weeks", "months", "years", "work", "things",
      "ideas", "topics", "items", "results", "outcomes", "levels", "steps",
      "step", "activities", "areas", "decisions", "conflicts", "disputes",
      "concerns", "matters", "criteria", "requirements", "permissions",
      "rights", "privileges", "access", "status", "which", "what", "who",
  };
  return kNouns;
}

bool looks_plural(std::string_view word) {
  if (word.size() < 3 || word.back() != 's') return false;
  return !(word.ends_with("ss") || word.ends_with("us") || word.ends_with("is"));
}

}  // namespace

bool is_agent_phrase(std::string_view phrase) {
  const auto tokens = tokenize(phrase);
  // Head noun: last word before a post-modifier.
  static const std::unordered_set<std::string> kCut = {
      "of", "who", "that", "which", "whose", "with", "in", "from", "on", "for", "at", "under"};
  std::vector<const Token*> words;
  for (const auto& t : tokens) {
    if (!t.is_word) {
      if (t.text == "(" || t.text == ",") break;
      continue;
    }
    if (kCut.contains(t.lower) && !words.empty()) break;
    words.push_back(&t);
  }
  if (words.empty()) return false;
  const Token& head = *words.back();
  std::string head_lower = head.lower;
  if (inanimate_heads().contains(head_lower)) return false;
  if (collective_nouns().contains(head_lower)) return true;
  if (looks_plural(head_lower)) {
    std::string singular = head_lower.substr(0, head_lower.size() - 1);
    if (inanimate_heads().contains(singular)) return false;
    return true;
  }
  // Proper nouns: mixed/upper case anywhere past the first letter ("TSC",
  // "GitHub"), or a capitalized head that is not the clause-initial word.
  const bool inner_upper = std::any_of(head.text.begin() + 1, head.text.end(),
                                       [](char c) { return is_upper_ascii(c); });
  if (inner_upper) return true;
  if (is_upper_ascii(head.text.front()) && &head != words.front()) return true;
  return false;
}

std::optional<RoleCategory> normalize_role(std::string_view role_text, const Lexicon& lexicon) {
  const auto words = phrase_words(role_text);
  if (words.empty()) return std::nullopt;
  if (auto m = lexicon.longest_match(words)) return parse_role_category(m->entry->category);
  if (is_agent_phrase(role_text)) return RoleCategory::misc;
  return std::nullopt;
}

std::optional<ActionCategory> categorize_action(std::string_view action_lemma,
                                                std::string_view sentence_context,
                                                const Lexicon& lexicon) {
  const auto lemma_words = phrase_words(action_lemma);
  if (lemma_words.empty()) return std::nullopt;
  const auto context = phrase_words(sentence_context);

  const LexiconEntry* best = nullptr;
  for (const auto& entry : lexicon.entries()) {
    if (entry.words.size() < lemma_words.size()) continue;
    if (!std::equal(lemma_words.begin(), lemma_words.end(), entry.words.begin())) continue;
    if (entry.words.size() > lemma_words.size()) {
      std::span<const std::string> rest(entry.words.begin() + static_cast<long>(lemma_words.size()),
                                        entry.words.end());
      if (!contains_sequence(context, rest)) continue;
    }
    if (!best || entry.surface.size() > best->surface.size()) best = &entry;
  }
  if (!best) return std::nullopt;
  for (const auto& cue : best->cues)
    if (contains_sequence(context, cue.words)) return parse_action_category(cue.category);
  return parse_action_category(best->category);
}

}  // namespace govgram
