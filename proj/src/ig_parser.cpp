#include "govgram/ig_parser.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace govgram {

std::string_view to_string(Modal m) noexcept { return kModalNames[static_cast<std::size_t>(m)]; }
std::string_view to_string(DeonticStrength s) noexcept {
  return kDeonticStrengthNames[static_cast<std::size_t>(s)];
}
std::string_view to_string(DeonticPolarity p) noexcept {
  return kDeonticPolarityNames[static_cast<std::size_t>(p)];
}

std::optional<Modal> parse_modal(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kModalNames.size(); ++i)
    if (kModalNames[i] == name) return static_cast<Modal>(i);
  return std::nullopt;
}

std::optional<DeonticStrength> parse_deontic_strength(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kDeonticStrengthNames.size(); ++i)
    if (kDeonticStrengthNames[i] == name) return static_cast<DeonticStrength>(i);
  return std::nullopt;
}

std::optional<DeonticPolarity> parse_deontic_polarity(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kDeonticPolarityNames.size(); ++i)
    if (kDeonticPolarityNames[i] == name) return static_cast<DeonticPolarity>(i);
  return std::nullopt;
}

DeonticStrength DeonticType::strength() const noexcept {
  switch (modal) {
    case Modal::may:
    case Modal::can:
    case Modal::could:
      return DeonticStrength::permissive;
    case Modal::should:
    case Modal::would:
      return DeonticStrength::advisory;
    case Modal::must:
    case Modal::shall:
    case Modal::will:
      return DeonticStrength::obligatory;
  }
  return DeonticStrength::permissive;
}

std::string DeonticType::surface() const {
  if (!negated) return std::string(to_string(modal));
  if (modal == Modal::can) return "cannot";
  return std::string(to_string(modal)) + " not";
}

std::optional<DeonticType> canonicalize_deontic(std::string_view modal_surface, bool negated) {
  const auto modal = parse_modal(to_lower(trim(modal_surface)));
  if (!modal) return std::nullopt;
  return DeonticType{*modal, negated};
}

namespace {

std::string normalize_apostrophes(std::string_view word) {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word.substr(i, 3) == "\xE2\x80\x99") {
      out.push_back('\'');
      i += 2;
    } else {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(word[i]))));
    }
  }
  return out;
}

struct ModalForm {
  Modal modal;
  bool negated;
};

// Single-token modal forms, including negative contractions.
std::optional<ModalForm> modal_token(std::string_view lower) {
  static const std::unordered_map<std::string, ModalForm> kForms = {
      {"may", {Modal::may, false}},       {"can", {Modal::can, false}},
      {"could", {Modal::could, false}},   {"should", {Modal::should, false}},
      {"shall", {Modal::shall, false}},   {"must", {Modal::must, false}},
      {"will", {Modal::will, false}},     {"would", {Modal::would, false}},
      {"cannot", {Modal::can, true}},     {"can't", {Modal::can, true}},
      {"couldn't", {Modal::could, true}}, {"shouldn't", {Modal::should, true}},
      {"shan't", {Modal::shall, true}},   {"mustn't", {Modal::must, true}},
      {"won't", {Modal::will, true}},     {"wouldn't", {Modal::would, true}},
      {"mayn't", {Modal::may, true}},
  };
  const auto it = kForms.find(normalize_apostrophes(lower));
  if (it == kForms.end()) return std::nullopt;
  return it->second;
}

// Auxiliaries that introduce a verb but carry no deontic in the closed set.
bool is_other_modal(std::string_view lower) {
  return lower == "might" || lower == "ought" || lower == "mightn't";
}

bool is_negator(std::string_view lower) { return lower == "not" || lower == "never"; }

}  // namespace

std::optional<DeonticType> parse_deontic_surface(std::string_view surface) {
  const auto words = tokenize(surface);
  if (words.empty()) return std::nullopt;
  auto form = modal_token(words[0].lower);
  if (!form) return std::nullopt;
  bool negated = form->negated;
  for (std::size_t i = 1; i < words.size(); ++i)
    if (is_negator(words[i].lower)) negated = true;
  return DeonticType{form->modal, negated};
}

// ---------------------------------------------------------------------------
// Lemmatization

namespace {

const std::unordered_map<std::string, std::string>& irregular_verbs() {
  static const std::unordered_map<std::string, std::string> kTable = {
      {"is", "be"},        {"are", "be"},        {"was", "be"},         {"were", "be"},
      {"been", "be"},      {"being", "be"},      {"am", "be"},          {"'s", "be"},
      {"has", "have"},     {"had", "have"},      {"having", "have"},    {"does", "do"},
      {"did", "do"},       {"done", "do"},       {"held", "hold"},      {"chosen", "choose"},
      {"chose", "choose"}, {"made", "make"},     {"took", "take"},      {"taken", "take"},
      {"gave", "give"},    {"given", "give"},    {"wrote", "write"},    {"written", "write"},
      {"led", "lead"},     {"met", "meet"},      {"ran", "run"},        {"left", "leave"},
      {"kept", "keep"},    {"sent", "send"},     {"spent", "spend"},    {"built", "build"},
      {"paid", "pay"},     {"said", "say"},      {"told", "tell"},      {"brought", "bring"},
      {"bought", "buy"},   {"thought", "think"}, {"sought", "seek"},    {"found", "find"},
      {"got", "get"},      {"gotten", "get"},    {"became", "become"},  {"began", "begin"},
      {"begun", "begin"},  {"broke", "break"},   {"broken", "break"},   {"won", "win"},
      {"knew", "know"},    {"known", "know"},    {"saw", "see"},        {"seen", "see"},
      {"shown", "show"},   {"drew", "draw"},     {"drawn", "draw"},     {"forbade", "forbid"},
      {"forbidden", "forbid"}, {"withdrew", "withdraw"}, {"withdrawn", "withdraw"},
      {"oversaw", "oversee"},  {"overseen", "oversee"},  {"undertook", "undertake"},
      {"undertaken", "undertake"}, {"stood", "stand"},   {"understood", "understand"},
      {"upheld", "uphold"},  {"withheld", "withhold"},   {"overrode", "override"},
      {"overridden", "override"}, {"rode", "ride"},      {"rose", "rise"},
      {"risen", "rise"},     {"spoke", "speak"},   {"spoken", "speak"},   {"heard", "hear"},
      {"meant", "mean"},     {"dealt", "deal"},    {"felt", "feel"},      {"lost", "lose"},
      {"sat", "sit"},        {"fell", "fall"},     {"fallen", "fall"},    {"grew", "grow"},
      {"grown", "grow"},     {"ate", "eat"},       {"eaten", "eat"},      {"forgot", "forget"},
      {"forgotten", "forget"}, {"hid", "hide"},    {"hidden", "hide"},    {"bore", "bear"},
      {"borne", "bear"},     {"swore", "swear"},   {"sworn", "swear"},    {"elected", "elect"},
      {"dies", "die"},       {"ties", "tie"},      {"lies", "lie"},
  };
  return kTable;
}

const std::unordered_set<std::string>& builtin_verbs() {
  static const std::unordered_set<std::string> kVerbs = {
      // aggregation
      "discuss", "negotiate", "contribute", "vote", "deliberate", "collaborate", "agree",
      "consult", "participate", "coordinate", "meet", "debate", "cooperate", "convene",
      // position
      "appoint", "compose", "serve", "elect", "nominate", "join", "become", "remain",
      "promote", "invite", "step", "hold", "rotate", "retire", "replace",
      // information
      "document", "receive", "monitor", "inspect", "report", "notify", "inform", "announce",
      "publish", "record", "track", "communicate", "share", "disclose", "review", "audit",
      "list", "post", "respond", "explain", "reply", "acknowledge", "summarize", "note",
      // choice
      "submit", "build", "use", "merge", "resign", "open", "create", "file", "commit",
      "release", "fix", "follow", "send", "make", "write", "test", "close", "triage",
      "label", "fork", "push", "work", "help", "provide", "propose", "request", "ask",
      "raise", "update", "add", "remove", "leave", "withdraw", "implement", "run", "sign",
      "abstain", "comply", "respect", "attend", "handle", "escalate", "volunteer", "do",
      "maintain", "pull", "tag", "deprecate", "backport", "patch", "send", "keep", "try",
      "start", "begin", "continue", "stop", "choose", "take", "give", "get", "bring",
      "seek", "find", "reach", "mentor", "support", "onboard", "welcome", "contact",
      // constitutive
      "comprise", "include", "describe", "exist", "be", "consist", "define", "represent",
      "constitute", "have", "contain", "cover", "apply", "outline", "establish", "refer",
      "mean", "form", "belong",
      // authority
      "approve", "assign", "require", "select", "mandate", "amend", "decide", "veto",
      "ratify", "grant", "revoke", "oversee", "authorize", "delegate", "enforce",
      "override", "govern", "manage", "lead", "direct", "set", "determine", "permit",
      "allow", "reject", "accept", "resolve", "suspend", "ban", "own", "control", "expel",
      "forbid", "prohibit", "restrict", "block", "moderate", "arbitrate", "adjudicate",
      "finalize", "confirm", "endorse", "sponsor", "ensure", "prioritize", "plan",
      // payoff
      "pay", "distribute", "compensate", "deposit", "penalize", "fund", "donate", "reimburse",
      "reward", "spend", "charge", "earn", "fine", "invoice",
      // common
      "expect", "encourage", "need", "want", "wish", "seem", "say", "tell", "think", "know",
      "see", "show", "call", "consider", "act", "operate", "facilitate", "organize",
      "schedule", "host", "break", "win", "stand", "understand", "uphold", "withhold",
      "undertake", "lose", "deal", "speak", "hear", "feel", "sit", "fall", "grow", "change",
      "move", "gain", "lack", "count", "pass", "fail", "obtain", "complete", "occur", "fill",
      "happen", "rely", "depend", "intend", "aim", "strive", "enable", "evaluate",
      "assess", "verify", "check", "measure", "answer", "encourage", "mediate", "host",
      "archive", "delete", "edit", "modify", "revise", "revert", "approve", "notify",
  };
  return kVerbs;
}

bool ends_with_double_consonant(std::string_view s) {
  if (s.size() < 2) return false;
  const char a = s[s.size() - 1];
  const char b = s[s.size() - 2];
  static constexpr std::string_view kVowels = "aeiou";
  return a == b && kVowels.find(a) == std::string_view::npos && a != 'l' && a != 's' && a != 'f' &&
         a != 'z';
}

template <typename Known>
std::string lemmatize_with(std::string_view surface, const Known& known) {
  const std::string w = normalize_apostrophes(surface);
  if (const auto it = irregular_verbs().find(w); it != irregular_verbs().end()) return it->second;
  if (known(w)) return w;

  std::vector<std::string> candidates;
  std::string fallback;
  auto strip = [&](std::size_t n) { return w.substr(0, w.size() - n); };

  if (w.size() > 4 && w.ends_with("ies")) {
    candidates.push_back(strip(3) + "y");
    fallback = candidates.back();
  } else if (w.size() > 4 && w.ends_with("ied")) {
    candidates.push_back(strip(3) + "y");
    fallback = candidates.back();
  } else if (w.size() > 3 && w.ends_with("es")) {
    candidates.push_back(strip(1));  // merges -> merge
    candidates.push_back(strip(2));  // pushes -> push
    const auto stem = strip(2);
    const bool sibilant = stem.ends_with("s") || stem.ends_with("x") || stem.ends_with("z") ||
                          stem.ends_with("ch") || stem.ends_with("sh");
    fallback = sibilant ? stem : strip(1);
  } else if (w.size() > 3 && w.ends_with("s") && !w.ends_with("ss") && !w.ends_with("us") &&
             !w.ends_with("is")) {
    candidates.push_back(strip(1));
    fallback = candidates.back();
  } else if (w.size() > 4 && w.ends_with("ed")) {
    candidates.push_back(strip(1));  // merged -> merge
    candidates.push_back(strip(2));  // appointed -> appoint
    const auto stem = strip(2);
    if (ends_with_double_consonant(stem)) candidates.push_back(stem.substr(0, stem.size() - 1));
    fallback = ends_with_double_consonant(stem) ? stem.substr(0, stem.size() - 1) : stem;
  } else if (w.size() > 5 && w.ends_with("ing")) {
    const auto stem = strip(3);
    candidates.push_back(stem);
    candidates.push_back(stem + "e");
    if (ends_with_double_consonant(stem)) candidates.push_back(stem.substr(0, stem.size() - 1));
    fallback = stem;
  } else {
    return w;
  }
  for (const auto& c : candidates)
    if (known(c)) return c;
  return fallback;
}

}  // namespace

std::string lemmatize_verb(std::string_view surface) {
  return lemmatize_with(surface, [](const std::string& w) { return builtin_verbs().contains(w); });
}

VerbInventory::VerbInventory(const Lexicon* actions) {
  if (actions == nullptr) return;
  for (const auto& e : actions->entries())
    if (!builtin_verbs().contains(e.words.front())) extra_.push_back(e.words.front());
  std::sort(extra_.begin(), extra_.end());
  extra_.erase(std::unique(extra_.begin(), extra_.end()), extra_.end());
}

bool VerbInventory::contains(std::string_view lemma) const {
  const std::string key(lemma);
  return builtin_verbs().contains(key) || std::binary_search(extra_.begin(), extra_.end(), key);
}

std::string VerbInventory::lemmatize(std::string_view surface) const {
  return lemmatize_with(surface, [this](const std::string& w) { return contains(w); });
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

const std::unordered_set<std::string>& determiners() {
  static const std::unordered_set<std::string> kWords = {
      "the", "a", "an", "this", "that", "these", "those", "its", "their", "our", "your",
      "his", "her", "my", "each", "every", "any", "all", "some", "no", "such", "another",
      "other", "both", "either", "neither", "which", "whose", "what", "one", "two", "three",
      "new", "own", "more", "most", "many", "few", "several"};
  return kWords;
}

const std::unordered_set<std::string>& prepositions() {
  static const std::unordered_set<std::string> kWords = {
      "of", "to", "for", "in", "on", "at", "by", "with", "from", "into", "onto", "about",
      "over", "under", "within", "without", "through", "between", "among", "across",
      "after", "before", "during", "per", "via", "upon", "against", "than", "as", "until",
      "including", "regarding", "following", "like", "unlike", "toward", "towards"};
  return kWords;
}

const std::unordered_set<std::string>& clause_openers() {
  static const std::unordered_set<std::string> kWords = {
      "if", "when", "whenever", "once", "where", "unless", "after", "before", "until",
      "while", "although", "though", "because", "since", "upon", "as", "in", "for", "on",
      "at", "during", "within", "with", "by", "under", "following", "prior", "otherwise",
      "however", "additionally", "finally", "then", "also", "moreover", "furthermore",
      "similarly", "likewise", "generally", "typically", "normally", "note", "currently",
      "ideally", "first", "second", "third", "lastly", "today", "thus", "therefore",
      "instead", "meanwhile", "alternatively", "importantly", "specifically"};
  return kWords;
}

const std::unordered_set<std::string>& relative_markers() {
  static const std::unordered_set<std::string> kWords = {
      "that", "which", "who", "whom", "whose", "if", "when", "where", "because", "unless",
      "while", "so", "whether", "whenever", "once", "until"};
  return kWords;
}

const std::unordered_set<std::string>& adverbs() {
  static const std::unordered_set<std::string> kWords = {
      "also", "only", "always", "still", "then", "either", "jointly", "collectively",
      "together", "each", "all", "both", "first", "just", "even", "again", "now",
      "typically", "usually", "generally", "normally", "further", "thereafter", "instead",
      "not", "never", "at", "least", "ever", "simply", "immediately", "promptly", "otherwise"};
  return kWords;
}

const std::unordered_set<std::string>& be_complements_to() {
  // "are expected to VERB" and friends: the governed verb follows "to".
  static const std::unordered_set<std::string> kWords = {
      "expected", "required", "encouraged", "allowed", "permitted", "obligated", "obliged",
      "able", "responsible", "free", "welcome", "invited", "asked", "entitled", "empowered",
      "authorized", "eligible", "supposed", "expected", "going", "requested", "urged"};
  return kWords;
}

const std::unordered_set<std::string>& subject_pronouns() {
  static const std::unordered_set<std::string> kWords = {
      "they", "he", "she", "it", "we", "you", "i", "one", "this", "that", "there", "these",
      "those", "someone", "no"};
  return kWords;
}

bool is_clause_punct(const Token& t) {
  return !t.is_word && (t.text == ";" || t.text == "." || t.text == "!" || t.text == "?");
}

class SentenceParser {
 public:
  SentenceParser(const Sentence& sentence, const TaxonomyLexicons& lexicons)
      : text_(sentence.text),
        tokens_(tokenize(sentence.text)),
        lexicons_(lexicons),
        verbs_(&lexicons.actions) {}

  std::vector<InstitutionalStatement> run(const SentenceRef& ref) {
    std::vector<InstitutionalStatement> out;
    InstitutionalStatement base;
    base.ref = ref;
    base.sentence_text = std::string(text_);

    const std::size_t start = clause_start();
    auto group = find_verb_group(start, tokens_.size());
    if (!group) {
      out.push_back(base);
      return out;
    }

    // Subject. A passive clause names its agent in a "by" phrase, if at all.
    if (group->passive) {
      if (auto agent = by_agent(group->predicate_end)) fill_role(base, agent->first, agent->second);
    } else {
      fill_role(base, start, group->subject_end);
    }

    InstitutionalStatement first = base;
    apply_group(first, *group);
    out.push_back(first);

    // Coordinated verb groups sharing the subject.
    std::size_t cursor = group->predicate_end;
    VerbGroup previous = *group;
    while (auto next = coordinated_group(cursor, previous)) {
      InstitutionalStatement extra = base;
      extra.ref.clause = out.size();
      if (!next->deontic && previous.deontic) {
        next->deontic = previous.deontic;
        next->deontic_span = previous.deontic_span;
      }
      apply_group(extra, *next);
      out.push_back(extra);
      cursor = next->predicate_end;
      previous = *next;
    }
    return out;
  }

 private:
  struct VerbGroup {
    std::size_t subject_end = 0;  // first token of the group
    std::optional<DeonticType> deontic;
    std::optional<Span> deontic_span;
    std::optional<std::size_t> verb;  // token index
    std::string lemma;
    bool passive_or_copula = false;
    bool passive = false;
    bool after_modal = false;
    std::optional<std::size_t> object;
    std::size_t predicate_end = 0;  // token after verb + object
  };

  std::size_t next_word(std::size_t i) const {
    while (i < tokens_.size() && !tokens_[i].is_word) ++i;
    return i;
  }

  const Token* word_at(std::size_t i) const {
    return i < tokens_.size() && tokens_[i].is_word ? &tokens_[i] : nullptr;
  }

  std::size_t clause_start() const {
    const std::size_t first = next_word(0);
    if (first >= tokens_.size()) return first;
    if (!clause_openers().contains(tokens_[first].lower)) return first;
    for (std::size_t i = first + 1; i < tokens_.size(); ++i) {
      if (tokens_[i].text == ",") return next_word(i + 1);
      if (is_clause_punct(tokens_[i])) break;
    }
    return first;
  }

  bool is_adverb(const Token& t) const {
    if (adverbs().contains(t.lower)) return true;
    return t.lower.size() > 4 && t.lower.ends_with("ly") && !verbs_.contains(t.lower);
  }

  bool is_participle(const Token& t) const {
    if (!t.is_word) return false;
    const auto& w = t.lower;
    const bool form = w.ends_with("ed") || (irregular_verbs().contains(w) && w != "is" &&
                                            w != "are" && w != "was" && w != "were" &&
                                            w != "has" && w != "does" && w != "am");
    return form && verbs_.contains(verbs_.lemmatize(w));
  }

  // Finite main verb candidate at i when no modal governs the clause.
  bool finite_verb_candidate(std::size_t i, std::size_t start) const {
    const Token& t = tokens_[i];
    if (!t.is_word || i == start) return false;
    if (is_upper_ascii(t.text.front())) return false;
    if (t.lower.ends_with("ing")) return false;
    if (determiners().contains(t.lower) || prepositions().contains(t.lower)) return false;
    if (!verbs_.contains(verbs_.lemmatize(t.lower))) return false;
    // Preceding word must not make this a noun or infinitive.
    std::size_t p = i;
    while (p > start && !tokens_[p - 1].is_word) {
      if (tokens_[p - 1].text == "(" || tokens_[p - 1].text == "\"") return false;
      --p;
    }
    if (p == start && i == start) return false;
    if (p > start) {
      const auto& prev = tokens_[p - 1].lower;
      if (determiners().contains(prev) || prepositions().contains(prev) || prev == "to") return false;
    }
    const std::size_t n = next_word(i + 1);
    if (n < tokens_.size() && tokens_[n].lower == "of") return false;
    return true;
  }

  static bool is_be_form(std::string_view w) {
    return w == "is" || w == "are" || w == "was" || w == "were" || w == "be" || w == "'s" ||
           w == "been";
  }

  std::optional<VerbGroup> find_verb_group(std::size_t start, std::size_t end) const {
    std::optional<std::size_t> modal_at;
    std::optional<std::size_t> relative_at;
    std::size_t clause_end = end;
    for (std::size_t i = start; i < end; ++i) {
      if (is_clause_punct(tokens_[i])) {
        clause_end = i;
        break;
      }
      if (!tokens_[i].is_word) continue;
      if (!modal_at && (modal_token(tokens_[i].lower) || is_other_modal(tokens_[i].lower))) {
        modal_at = i;
      }
      if (!relative_at && !modal_at && i > start && relative_markers().contains(tokens_[i].lower))
        relative_at = i;
    }

    // Imperative: clause-initial base verb with no modal in the clause.
    const Token* head = word_at(start);
    if (head && !modal_at && verbs_.contains(head->lower) && !is_be_form(head->lower)) {
      return predicate_from(start, start, std::nullopt, std::nullopt, false);
    }

    const std::size_t search_end = modal_at ? (relative_at ? *relative_at : start) : clause_end;
    for (std::size_t i = start; i < search_end; ++i) {
      const Token& t = tokens_[i];
      if (!t.is_word || i == start) continue;
      if (is_be_form(t.lower) || t.lower == "has" || t.lower == "have" || t.lower == "had" ||
          t.lower == "do" || t.lower == "does" || t.lower == "did") {
        if (tokens_[i - 1].lower == "to") continue;
        return predicate_from(i, i, std::nullopt, std::nullopt, false);
      }
      if (finite_verb_candidate(i, start)) return predicate_from(i, i, std::nullopt, std::nullopt, false);
    }
    if (!modal_at) return std::nullopt;

    // Modal group.
    std::size_t i = *modal_at;
    const Token& m = tokens_[i];
    std::optional<DeonticType> deontic;
    Span span = m.span;
    bool negated = false;
    if (auto form = modal_token(m.lower)) negated = form->negated;
    std::size_t j = i + 1;
    while (j < tokens_.size() && tokens_[j].is_word && is_adverb(tokens_[j])) {
      if (is_negator(tokens_[j].lower)) {
        negated = true;
        span.end = tokens_[j].span.end;
      }
      ++j;
    }
    if (auto form = modal_token(m.lower)) deontic = DeonticType{form->modal, negated};
    std::optional<Span> deontic_span;
    if (deontic) deontic_span = span;
    return predicate_from(i, j, deontic, deontic_span, true);
  }

  // Resolves the governed verb starting at token `v` (auxiliaries, passives,
  // "be expected to") and the object after it.
  std::optional<VerbGroup> predicate_from(std::size_t group_start, std::size_t v,
                                          std::optional<DeonticType> deontic,
                                          std::optional<Span> deontic_span,
                                          bool after_modal) const {
    VerbGroup g;
    g.subject_end = group_start;
    g.deontic = deontic;
    g.deontic_span = deontic_span;
    g.after_modal = after_modal;
    v = skip_adverbs(v);
    if (v >= tokens_.size() || !tokens_[v].is_word) {
      g.predicate_end = v;
      return g;
    }
    std::size_t verb = v;
    const std::string& w = tokens_[v].lower;
    if (w == "do" || w == "does" || w == "did") {
      const std::size_t n = skip_adverbs(v + 1);
      if (n < tokens_.size() && tokens_[n].is_word && verbs_.contains(tokens_[n].lower)) verb = n;
    } else if (is_be_form(w)) {
      g.passive_or_copula = true;
      std::size_t n = skip_adverbs(v + 1);
      if (n < tokens_.size() && tokens_[n].lower == "be") n = skip_adverbs(n + 1);  // "is to be"
      if (n < tokens_.size() && tokens_[n].lower == "been") n = skip_adverbs(n + 1);
      if (n < tokens_.size() && be_complements_to().contains(tokens_[n].lower)) {
        const std::size_t to = next_word(n + 1);
        if (to < tokens_.size() && tokens_[to].lower == "to") {
          const std::size_t target = skip_adverbs(to + 1);
          if (target < tokens_.size() && tokens_[target].is_word) {
            verb = target;
            g.passive_or_copula = false;
          }
        }
      } else if (n < tokens_.size() && is_participle(tokens_[n])) {
        verb = n;
        g.passive = true;
      }
    } else if (w == "have" || w == "has" || w == "had" || w == "need" || w == "needs") {
      const std::size_t n = skip_adverbs(v + 1);
      if (n < tokens_.size() && tokens_[n].lower == "to") {
        const std::size_t target = skip_adverbs(n + 1);
        if (target < tokens_.size() && tokens_[target].is_word) verb = target;
      } else if ((w == "have" || w == "has" || w == "had") && n < tokens_.size() &&
                 is_participle(tokens_[n]) && tokens_[n].lower.ends_with("ed")) {
        verb = n;
      }
    }
    g.verb = verb;
    g.lemma = verbs_.lemmatize(tokens_[verb].lower);
    std::size_t after = verb + 1;
    // Particle of a multi-word lexicon verb ("step down", "sign off").
    if (const Token* p = word_at(after)) {
      const std::vector<std::string> phrase = {g.lemma, p->lower};
      if (lexicons_.actions.exact(phrase) != nullptr) ++after;
    }
    g.predicate_end = after;
    if (!g.passive_or_copula) {
      if (auto obj = find_object(after)) {
        g.object = obj->first;
        g.predicate_end = obj->second;
      }
    }
    return g;
  }

  std::size_t skip_adverbs(std::size_t i) const {
    while (i < tokens_.size() && tokens_[i].is_word && is_adverb(tokens_[i])) ++i;
    return i;
  }

  // Head noun of the direct object and the token after the noun phrase.
  std::optional<std::pair<std::size_t, std::size_t>> find_object(std::size_t i) const {
    static const std::unordered_set<std::string> kStop = {
        "and", "or", "but", "nor", "if", "when", "unless", "whether", "so", "then",
        "until", "while", "where", "because", "after", "before"};
    std::optional<std::size_t> head;
    std::size_t j = i;
    for (; j < tokens_.size(); ++j) {
      const Token& t = tokens_[j];
      if (!t.is_word) {
        if (t.text == "-" || t.text == "/" || t.text == "'") continue;
        break;
      }
      if (prepositions().contains(t.lower) || kStop.contains(t.lower) ||
          relative_markers().contains(t.lower) || modal_token(t.lower))
        break;
      if (determiners().contains(t.lower)) {
        if (head) break;
        continue;
      }
      if (is_adverb(t)) {
        if (!head) continue;
        static const std::unordered_set<std::string> kLyNouns = {
            "assembly", "family", "supply", "reply", "rally", "anomaly", "monopoly", "ally"};
        if (!kLyNouns.contains(t.lower)) break;
      }
      head = j;
    }
    if (!head) return std::nullopt;
    return std::make_pair(*head, j);
  }

  // Noun phrase after "by" following a passive verb.
  std::optional<std::pair<std::size_t, std::size_t>> by_agent(std::size_t from) const {
    for (std::size_t i = from; i < tokens_.size(); ++i) {
      const Token& t = tokens_[i];
      if (is_clause_punct(t)) return std::nullopt;
      if (!t.is_word) continue;
      if (t.lower != "by") {
        if (modal_token(t.lower) || relative_markers().contains(t.lower)) return std::nullopt;
        continue;
      }
      std::size_t j = i + 1;
      while (j < tokens_.size()) {
        const Token& w = tokens_[j];
        if (!w.is_word && w.text != "-") break;
        if (w.is_word && (prepositions().contains(w.lower) || w.lower == "and" ||
                          w.lower == "or" || relative_markers().contains(w.lower)))
          break;
        ++j;
      }
      if (j > i + 1) return std::make_pair(i + 1, j);
      return std::nullopt;
    }
    return std::nullopt;
  }

  void fill_role(InstitutionalStatement& st, std::size_t start, std::size_t end) const {
    static const std::unordered_set<std::string> kLeading = {"the", "a", "an", "only", "both", "either"};
    std::size_t b = start;
    std::size_t e = end;
    // Cut appositives and parentheticals.
    for (std::size_t i = start; i < end; ++i) {
      if (!tokens_[i].is_word && (tokens_[i].text == "(" || tokens_[i].text == "," ||
                                  tokens_[i].text == "\"" || tokens_[i].text == "[")) {
        e = i;
        break;
      }
    }
    // "chair: convene" rows; the label before the colon is the subject.
    for (std::size_t i = b; i < e; ++i) {
      if (tokens_[i].text == ":") {
        e = i;
        break;
      }
    }
    while (b < e && (!tokens_[b].is_word || kLeading.contains(tokens_[b].lower))) ++b;
    while (e > b && !tokens_[e - 1].is_word) --e;
    if (b >= e) return;
    if (e - b == 1 && subject_pronouns().contains(tokens_[b].lower)) return;
    const Span span{tokens_[b].span.begin, tokens_[e - 1].span.end};
    const auto phrase = slice(text_, span);
    const auto words = phrase_words(phrase);
    const bool lexicon_hit = lexicons_.roles.longest_match(words).has_value();
    if (!lexicon_hit && !is_agent_phrase(phrase)) return;
    st.role_text = std::string(phrase);
    st.role_span = span;
  }

  void apply_group(InstitutionalStatement& st, const VerbGroup& g) const {
    st.deontic = g.deontic;
    st.deontic_span = g.deontic ? g.deontic_span : std::nullopt;
    if (g.verb) {
      st.action_lemma = g.lemma;
      st.action_span = tokens_[*g.verb].span;
    }
    if (g.object) {
      st.object_text = std::string(tokens_[*g.object].text);
      st.object_span = tokens_[*g.object].span;
    }
  }

  enum class Form { base, third_person, past, other };

  Form form_of(const Token& t) const {
    const std::string lemma = verbs_.lemmatize(t.lower);
    if (lemma == t.lower) return Form::base;
    if (t.lower.ends_with("s")) return Form::third_person;
    if (t.lower.ends_with("ed") || irregular_verbs().contains(t.lower)) return Form::past;
    return Form::other;
  }

  // "and"/"or" followed by a modal group or a verb in the same form.
  std::optional<VerbGroup> coordinated_group(std::size_t from, const VerbGroup& previous) const {
    if (!previous.verb) return std::nullopt;
    for (std::size_t i = from; i < tokens_.size(); ++i) {
      const Token& t = tokens_[i];
      if (is_clause_punct(t)) return std::nullopt;
      if (!t.is_word) continue;
      if (t.lower != "and" && t.lower != "or") {
        if (relative_markers().contains(t.lower) || modal_token(t.lower)) return std::nullopt;
        continue;
      }
      std::size_t n = skip_adverbs(i + 1);
      if (n < tokens_.size() && tokens_[n].lower == "then") n = skip_adverbs(n + 1);
      const Token* next = word_at(n);
      if (!next) continue;
      if (modal_token(next->lower)) {
        auto g = find_verb_group(n, tokens_.size());
        if (g && g->verb) return g;
        return std::nullopt;
      }
      if (is_upper_ascii(next->text.front()) || determiners().contains(next->lower)) continue;
      if (!verbs_.contains(verbs_.lemmatize(next->lower))) continue;
      const Form expected = previous.after_modal ? Form::base : form_of(tokens_[*previous.verb]);
      if (previous.passive_or_copula) continue;
      if (form_of(*next) != expected) continue;
      auto g = predicate_from(n, n, std::nullopt, std::nullopt, previous.after_modal);
      if (g && g->verb) return g;
    }
    return std::nullopt;
  }

  std::string_view text_;
  std::vector<Token> tokens_;
  const TaxonomyLexicons& lexicons_;
  VerbInventory verbs_;
};

}  // namespace

std::vector<InstitutionalStatement> parse_sentence(const Sentence& sentence, SentenceRef ref,
                                                   const TaxonomyLexicons& lexicons) {
  ref.clause = 0;
  return SentenceParser(sentence, lexicons).run(ref);
}

InstitutionalStatement parse_statement(const Sentence& sentence, const TaxonomyLexicons& lexicons) {
  return parse_sentence(sentence, SentenceRef{}, lexicons).front();
}

std::vector<InstitutionalStatement> parse_document(const NormalizedDoc& doc,
                                                   const TaxonomyLexicons& lexicons) {
  std::vector<InstitutionalStatement> out;
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    SentenceRef ref{doc.repo_id, doc.snapshot, i, 0};
    auto parsed = parse_sentence(doc.sentences[i], ref, lexicons);
    out.insert(out.end(), std::make_move_iterator(parsed.begin()),
               std::make_move_iterator(parsed.end()));
  }
  return out;
}

}  // namespace govgram
