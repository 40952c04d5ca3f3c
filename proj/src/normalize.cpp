#include "govgram/normalize.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <regex>
#include <unordered_set>

namespace govgram {

std::string_view to_string(Snapshot s) noexcept {
  return s == Snapshot::initial ? "initial" : "latest";
}

std::optional<Snapshot> parse_snapshot(std::string_view name) noexcept {
  if (name == "initial") return Snapshot::initial;
  if (name == "latest") return Snapshot::latest;
  return std::nullopt;
}

namespace {

constexpr std::size_t kSynthetic = std::numeric_limits<std::size_t>::max();

// Text paired with the raw offset of every byte; synthesized bytes carry
// kSynthetic.
struct Tracked {
  std::string text;
  std::vector<std::size_t> origin;

  void push(char c, std::size_t from) {
    text.push_back(c);
    origin.push_back(from);
  }
  void append(const Tracked& other) {
    text += other.text;
    origin.insert(origin.end(), other.origin.begin(), other.origin.end());
  }
  void append_synthetic(std::string_view s) {
    for (char c : s) push(c, kSynthetic);
  }
  Tracked sub(std::size_t pos, std::size_t len = std::string::npos) const {
    Tracked out;
    len = std::min(len, text.size() - pos);
    out.text = text.substr(pos, len);
    out.origin.assign(origin.begin() + static_cast<long>(pos),
                      origin.begin() + static_cast<long>(pos + len));
    return out;
  }
  bool empty() const { return text.empty(); }
};

Tracked trim_tracked(const Tracked& t) {
  std::size_t b = 0;
  std::size_t e = t.text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(t.text[b])) != 0) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(t.text[e - 1])) != 0) --e;
  return t.sub(b, e - b);
}

Tracked collapse_tracked(const Tracked& t) {
  Tracked out;
  bool pending = false;
  std::size_t pending_origin = kSynthetic;
  for (std::size_t i = 0; i < t.text.size(); ++i) {
    const char c = t.text[i];
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      if (!pending) pending_origin = t.origin[i];
      pending = !out.empty();
      continue;
    }
    if (pending) out.push(' ', pending_origin);
    pending = false;
    out.push(c, t.origin[i]);
  }
  return out;
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 ||
         static_cast<unsigned char>(c) >= 0x80;
}

// Index of the bracket closing the one at `open`, or npos.
std::size_t find_close(std::string_view s, std::size_t open, char o, char c) {
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == o) ++depth;
    if (s[i] == c && --depth == 0) return i;
  }
  return std::string_view::npos;
}

// Removes ![alt](src) and ![alt][ref] constructs.
Tracked strip_images(const Tracked& in) {
  Tracked out;
  const std::string_view s = in.text;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '!' && i + 1 < s.size() && s[i + 1] == '[') {
      const auto close = find_close(s, i + 1, '[', ']');
      if (close != std::string_view::npos && close + 1 < s.size() &&
          (s[close + 1] == '(' || s[close + 1] == '[')) {
        const char o = s[close + 1];
        const auto end = find_close(s, close + 1, o, o == '(' ? ')' : ']');
        if (end != std::string_view::npos) {
          i = end + 1;
          continue;
        }
      }
    }
    out.push(s[i], in.origin[i]);
    ++i;
  }
  return out;
}

// [text](url) and [text][ref] keep their text; links with empty text (left
// behind by linked badges) disappear.
Tracked strip_links(const Tracked& in) {
  Tracked out;
  const std::string_view s = in.text;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '[') {
      const auto close = find_close(s, i, '[', ']');
      if (close != std::string_view::npos && close + 1 < s.size() &&
          (s[close + 1] == '(' || s[close + 1] == '[')) {
        const char o = s[close + 1];
        const auto end = find_close(s, close + 1, o, o == '(' ? ')' : ']');
        if (end != std::string_view::npos) {
          Tracked inner = strip_links(in.sub(i + 1, close - i - 1));
          out.append(inner);
          i = end + 1;
          continue;
        }
      }
    }
    out.push(s[i], in.origin[i]);
    ++i;
  }
  return out;
}

// <https://...> keeps the address; other tags are dropped.
Tracked strip_html(const Tracked& in) {
  Tracked out;
  const std::string_view s = in.text;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '<' && i + 1 < s.size()) {
      const auto close = s.find('>', i + 1);
      if (close != std::string_view::npos) {
        const auto inner = s.substr(i + 1, close - i - 1);
        if (inner.starts_with("http://") || inner.starts_with("https://") ||
            inner.starts_with("mailto:")) {
          out.append(in.sub(i + 1, close - i - 1));
          i = close + 1;
          continue;
        }
        const char n = s[i + 1];
        if (std::isalpha(static_cast<unsigned char>(n)) != 0 || n == '/' || n == '!') {
          i = close + 1;
          continue;
        }
      }
    }
    out.push(s[i], in.origin[i]);
    ++i;
  }
  return out;
}

// reST inline markup: `text <url>`_, `text`_, :role:`text`, |substitution|.
Tracked strip_rst_inline(const Tracked& in) {
  Tracked out;
  const std::string_view s = in.text;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == ':' && i + 1 < s.size() && std::isalpha(static_cast<unsigned char>(s[i + 1])) != 0) {
      std::size_t j = i + 1;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) != 0 || s[j] == '-' || s[j] == '_')) ++j;
      if (j + 1 < s.size() && s[j] == ':' && s[j + 1] == '`') {
        i = j + 1;  // drop the role prefix, the backtick pass handles the rest
        continue;
      }
    }
    if (s[i] == '`' && !(i + 1 < s.size() && s[i + 1] == '`')) {
      const auto close = s.find('`', i + 1);
      if (close != std::string_view::npos && close + 1 < s.size() && s[close + 1] == '_') {
        auto inner = in.sub(i + 1, close - i - 1);
        const auto lt = inner.text.rfind(" <");
        if (lt != std::string::npos && inner.text.back() == '>') inner = inner.sub(0, lt);
        out.append(inner);
        i = close + 2;
        if (i < s.size() && s[i] == '_') ++i;
        continue;
      }
    }
    if (s[i] == '|' && i + 1 < s.size() && s[i + 1] != ' ' && s[i + 1] != '|') {
      const auto close = s.find('|', i + 1);
      if (close != std::string_view::npos && close > i + 1 && s[close - 1] != ' ' &&
          (close + 1 == s.size() || !is_word_char(s[close + 1])) &&
          (i == 0 || !is_word_char(s[i - 1])) &&
          s.substr(i + 1, close - i - 1).find(' ') == std::string_view::npos) {
        i = close + 1;
        continue;
      }
    }
    out.push(s[i], in.origin[i]);
    ++i;
  }
  return out;
}

// Emphasis, strikethrough and code markers. Underscores only count at word
// edges so snake_case identifiers survive.
Tracked strip_emphasis(const Tracked& in) {
  Tracked out;
  const std::string_view s = in.text;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    const char prev = i > 0 ? s[i - 1] : ' ';
    const char next = i + 1 < s.size() ? s[i + 1] : ' ';
    if (c == '`') continue;
    if (c == '~' && (next == '~' || prev == '~')) continue;
    if (c == '*') {
      std::size_t run_end = i;
      while (run_end < s.size() && s[run_end] == '*') ++run_end;
      const char before = i > 0 ? s[i - 1] : ' ';
      const char after = run_end < s.size() ? s[run_end] : ' ';
      const bool spaced = std::isspace(static_cast<unsigned char>(before)) != 0 &&
                          std::isspace(static_cast<unsigned char>(after)) != 0;
      if (!spaced) {
        i = run_end - 1;
        continue;
      }
    }
    if (c == '_') {
      std::size_t run_end = i;
      while (run_end < s.size() && s[run_end] == '_') ++run_end;
      const char before = i > 0 ? s[i - 1] : ' ';
      const char after = run_end < s.size() ? s[run_end] : ' ';
      if (!is_word_char(before) || !is_word_char(after)) {
        i = run_end - 1;
        continue;
      }
    }
    out.push(c, in.origin[i]);
  }
  return out;
}

Tracked decode_entities(const Tracked& in) {
  static const std::pair<std::string_view, char> kEntities[] = {
      {"&amp;", '&'}, {"&lt;", '<'},   {"&gt;", '>'},
      {"&quot;", '"'}, {"&#39;", '\''}, {"&nbsp;", ' '},
  };
  Tracked out;
  const std::string_view s = in.text;
  std::size_t i = 0;
  while (i < s.size()) {
    bool replaced = false;
    if (s[i] == '&') {
      for (const auto& [name, ch] : kEntities) {
        if (s.substr(i, name.size()) == name) {
          out.push(ch, in.origin[i]);
          i += name.size();
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) {
      out.push(s[i], in.origin[i]);
      ++i;
    }
  }
  return out;
}

Tracked clean_inline(const Tracked& line) {
  Tracked t = strip_images(line);
  t = strip_links(t);
  t = strip_html(t);
  t = strip_rst_inline(t);
  t = strip_emphasis(t);
  t = decode_entities(t);
  return collapse_tracked(t);
}

struct RawLine {
  std::string_view text;
  std::size_t offset = 0;
};

std::vector<RawLine> split_lines(std::string_view raw) {
  std::vector<RawLine> lines;
  std::size_t start = 0;
  while (start <= raw.size()) {
    auto end = raw.find('\n', start);
    if (end == std::string_view::npos) end = raw.size();
    auto text = raw.substr(start, end - start);
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    lines.push_back({text, start});
    if (end == raw.size()) break;
    start = end + 1;
  }
  return lines;
}

// Marks bytes inside <!-- ... --> so they never reach the output.
std::vector<bool> comment_mask(std::string_view raw) {
  std::vector<bool> mask(raw.size(), false);
  std::size_t pos = 0;
  while ((pos = raw.find("<!--", pos)) != std::string_view::npos) {
    auto end = raw.find("-->", pos + 4);
    end = end == std::string_view::npos ? raw.size() : end + 3;
    std::fill(mask.begin() + static_cast<long>(pos), mask.begin() + static_cast<long>(end), true);
    pos = end;
  }
  return mask;
}

std::size_t indent_of(std::string_view s) {
  std::size_t n = 0;
  while (n < s.size() && (s[n] == ' ' || s[n] == '\t')) ++n;
  return n;
}

bool is_fence(std::string_view trimmed) {
  return trimmed.starts_with("```") || trimmed.starts_with("~~~");
}

// A line made of one repeated punctuation character ("=====", "----").
bool is_adornment(std::string_view trimmed) {
  if (trimmed.size() < 3) return false;
  static constexpr std::string_view kChars = "=-~^*+#\"'`:.";
  const char c = trimmed.front();
  if (kChars.find(c) == std::string_view::npos) return false;
  return std::all_of(trimmed.begin(), trimmed.end(), [c](char x) { return x == c; });
}

bool is_thematic_break(std::string_view trimmed) {
  std::string compact;
  for (char c : trimmed)
    if (c != ' ') compact.push_back(c);
  if (compact.size() < 3) return false;
  const char c = compact.front();
  if (c != '-' && c != '*' && c != '_') return false;
  return std::all_of(compact.begin(), compact.end(), [c](char x) { return x == c; });
}

bool is_table_separator(std::string_view trimmed) {
  static const std::regex kSep(R"(^\|?\s*:?-+:?\s*(\|\s*:?-+:?\s*)*\|?$)");
  return trimmed.find('-') != std::string_view::npos &&
         trimmed.find('|') != std::string_view::npos &&
         std::regex_match(trimmed.begin(), trimmed.end(), kSep);
}

// "- ", "* ", "+ ", "1. ", "2) " markers. Returns marker length including
// the following whitespace, or 0.
std::size_t list_marker_length(std::string_view s) {
  const std::size_t ind = indent_of(s);
  if (ind >= s.size()) return 0;
  std::size_t i = ind;
  if (s[i] == '-' || s[i] == '*' || s[i] == '+') {
    ++i;
  } else if (std::isdigit(static_cast<unsigned char>(s[i])) != 0) {
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])) != 0) ++i;
    if (i - ind > 9 || i >= s.size() || (s[i] != '.' && s[i] != ')')) return 0;
    ++i;
  } else {
    return 0;
  }
  if (i >= s.size() || (s[i] != ' ' && s[i] != '\t')) return 0;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return i;
}

// ATX heading: up to three spaces, 1-6 '#', then space or end.
std::optional<std::size_t> atx_heading_text_start(std::string_view s) {
  const std::size_t ind = indent_of(s);
  if (ind > 3) return std::nullopt;
  std::size_t i = ind;
  while (i < s.size() && s[i] == '#') ++i;
  const std::size_t hashes = i - ind;
  if (hashes == 0 || hashes > 6) return std::nullopt;
  if (i < s.size() && s[i] != ' ' && s[i] != '\t') return std::nullopt;
  return i;
}

struct BlockBuilder {
  std::vector<Tracked> lines;
  bool last_is_item = false;

  bool empty() const { return lines.empty(); }
};

class MarkupNormalizer {
 public:
  explicit MarkupNormalizer(std::string_view raw) : raw_(raw), mask_(comment_mask(raw)) {}

  NormalizedDoc run() {
    const auto lines = split_lines(raw_);
    bool in_fence = false;
    std::string fence;
    bool skipping_directive = false;
    for (std::size_t li = 0; li < lines.size(); ++li) {
      const RawLine& line = lines[li];
      const Tracked visible = unmasked(line);
      const std::string_view text = visible.text;
      const std::string_view trimmed = trim(text);

      if (in_fence) {
        if (trimmed.starts_with(fence)) in_fence = false;
        continue;
      }
      if (skipping_directive) {
        if (trimmed.empty() || indent_of(text) > 0) {
          if (trimmed.empty()) flush();
          continue;
        }
        skipping_directive = false;
      }
      if (trimmed.empty()) {
        // A line emptied by a comment keeps the surrounding paragraph intact.
        if (trim(line.text).empty()) flush();
        continue;
      }
      if (is_fence(trimmed)) {
        flush();
        in_fence = true;
        fence = std::string(trimmed.substr(0, 3));
        continue;
      }
      if (trimmed.starts_with(".. ")) {
        flush();
        skipping_directive = true;
        continue;
      }
      if (trimmed.starts_with("[") && is_reference_definition(trimmed)) continue;

      // Setext / reST underline for a single pending prose line.
      if (is_adornment(trimmed) && pending_single_prose_line()) {
        Tracked title = current_.lines.back();
        current_.lines.clear();
        current_.last_is_item = false;
        emit_heading(title);
        continue;
      }
      if (is_adornment(trimmed) || is_thematic_break(trimmed)) {
        flush();
        continue;
      }
      if (auto start = atx_heading_text_start(text)) {
        flush();
        Tracked title = visible.sub(*start);
        // Closing hashes.
        while (!title.text.empty() && (title.text.back() == '#' || title.text.back() == ' ')) {
          title.text.pop_back();
          title.origin.pop_back();
        }
        emit_heading(title);
        continue;
      }
      if (text.find('|') != std::string_view::npos && li + 1 < lines.size() &&
          is_table_separator(trim(unmasked(lines[li + 1]).text))) {
        li = consume_table(lines, li);
        continue;
      }

      Tracked body = visible;
      // Block quote markers.
      {
        std::size_t i = indent_of(body.text);
        bool quoted = false;
        while (i < body.text.size() && body.text[i] == '>') {
          quoted = true;
          ++i;
          while (i < body.text.size() && body.text[i] == ' ') ++i;
        }
        if (quoted) body = body.sub(i);
      }
      if (const std::size_t marker = list_marker_length(body.text); marker > 0) {
        Tracked item = clean_inline(body.sub(marker));
        if (item.empty()) continue;
        Tracked out;
        out.append_synthetic("- ");
        out.append(item);
        current_.lines.push_back(std::move(out));
        current_.last_is_item = true;
        continue;
      }
      Tracked cleaned = clean_inline(body);
      if (cleaned.empty()) continue;
      if (!current_.lines.empty()) {
        // Continuation of the previous item or paragraph line.
        Tracked& last = current_.lines.back();
        last.push(' ', line.offset > 0 ? line.offset - 1 : kSynthetic);
        last.append(cleaned);
      } else {
        current_.lines.push_back(std::move(cleaned));
        current_.last_is_item = false;
      }
    }
    flush();
    return finish();
  }

 private:
  Tracked unmasked(const RawLine& line) const {
    Tracked t;
    for (std::size_t i = 0; i < line.text.size(); ++i) {
      const std::size_t at = line.offset + i;
      if (!mask_[at]) t.push(line.text[i], at);
    }
    return t;
  }

  static bool is_reference_definition(std::string_view trimmed) {
    static const std::regex kRef(R"(^\[[^\]]+\]:\s*\S+.*$)");
    return std::regex_match(trimmed.begin(), trimmed.end(), kRef);
  }

  bool pending_single_prose_line() const {
    return current_.lines.size() == 1 && !current_.last_is_item;
  }

  std::size_t consume_table(const std::vector<RawLine>& lines, std::size_t header) {
    flush();
    std::size_t li = header + 2;  // skip header and separator rows
    for (; li < lines.size(); ++li) {
      const Tracked row = unmasked(lines[li]);
      const auto trimmed = trim(row.text);
      if (trimmed.empty() || trimmed.find('|') == std::string_view::npos) break;
      Tracked bullet;
      bullet.append_synthetic("- ");
      bool first = true;
      std::size_t cell_start = 0;
      for (std::size_t i = 0; i <= row.text.size(); ++i) {
        if (i < row.text.size() && row.text[i] != '|') continue;
        Tracked cell = clean_inline(row.sub(cell_start, i - cell_start));
        cell_start = i + 1;
        if (cell.empty()) continue;
        if (!first) bullet.append_synthetic(": ");
        bullet.append(cell);
        first = false;
      }
      if (!first) {
        current_.lines.push_back(std::move(bullet));
        current_.last_is_item = true;
      }
    }
    flush();
    return li - 1;
  }

  void emit_heading(const Tracked& title) {
    Tracked cleaned = clean_inline(title);
    ++section_count_;
    if (cleaned.empty()) return;
    blocks_.push_back({std::move(cleaned), BlockKind::heading});
  }

  void flush() {
    if (current_.empty()) return;
    Tracked block;
    for (std::size_t i = 0; i < current_.lines.size(); ++i) {
      if (i > 0) block.push('\n', kSynthetic);
      block.append(trim_tracked(current_.lines[i]));
    }
    blocks_.push_back({std::move(block), BlockKind::text});
    current_ = {};
  }

  NormalizedDoc finish() {
    NormalizedDoc doc;
    doc.section_count = section_count_;
    Tracked all;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      if (i > 0) all.append_synthetic("\n\n");
      TextBlock block;
      block.kind = blocks_[i].kind;
      block.text = blocks_[i].content.text;
      block.span = {all.text.size(), all.text.size() + block.text.size()};
      all.append(blocks_[i].content);
      doc.blocks.push_back(std::move(block));
    }
    doc.text = std::move(all.text);
    // Collapse the per-byte origins into verbatim runs.
    for (std::size_t i = 0; i < all.origin.size(); ++i) {
      if (all.origin[i] == kSynthetic) continue;
      if (!doc.offset_map.empty()) {
        auto& last = doc.offset_map.back();
        if (last.normalized.end == i && last.original.end == all.origin[i]) {
          ++last.normalized.end;
          ++last.original.end;
          continue;
        }
      }
      doc.offset_map.push_back({{i, i + 1}, {all.origin[i], all.origin[i] + 1}});
    }
    return doc;
  }

  struct PendingBlock {
    Tracked content;
    BlockKind kind;
  };

  std::string_view raw_;
  std::vector<bool> mask_;
  BlockBuilder current_;
  std::vector<PendingBlock> blocks_;
  std::size_t section_count_ = 0;
};

// ---------------------------------------------------------------------------
// Segmentation

bool is_abbreviation(std::string_view text, std::size_t period) {
  static const std::unordered_set<std::string> kAbbrev = {
      "e.g.", "i.e.", "vs.", "cf.", "etc.,", "mr.", "mrs.", "ms.", "dr.",
      "inc.", "ltd.", "no.", "approx.", "st.", "jr.", "sr.", "v.", "al."};
  std::size_t start = period;
  while (start > 0 && std::isspace(static_cast<unsigned char>(text[start - 1])) == 0 &&
         text[start - 1] != '(')
    --start;
  const std::string word = to_lower(text.substr(start, period + 1 - start));
  if (kAbbrev.contains(word)) return true;
  // Single-letter initial ("J. Smith").
  return word.size() == 2 && std::isalpha(static_cast<unsigned char>(word[0])) != 0;
}

// Appends the sentences of text[begin, end) to `out`.
void split_sentences(std::string_view text, std::size_t begin, std::size_t end,
                     std::size_t block_index, std::vector<Sentence>& out) {
  auto emit = [&](std::size_t b, std::size_t e) {
    while (b < e && std::isspace(static_cast<unsigned char>(text[b])) != 0) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1])) != 0) --e;
    const auto piece = text.substr(b, e - b);
    if (std::none_of(piece.begin(), piece.end(), [](char c) { return is_word_char(c); })) return;
    Sentence s;
    s.text = std::string(piece);
    s.block_index = block_index;
    s.char_span = {b, e};
    out.push_back(std::move(s));
  };

  std::size_t start = begin;
  for (std::size_t i = begin; i < end; ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    while (j < end && (text[j] == '"' || text[j] == '\'' || text[j] == ')' || text[j] == '.' ||
                       text[j] == '!' || text[j] == '?'))
      ++j;
    if (j >= end || std::isspace(static_cast<unsigned char>(text[j])) == 0) continue;
    std::size_t k = j;
    while (k < end && std::isspace(static_cast<unsigned char>(text[k])) != 0) ++k;
    if (k >= end) continue;
    std::size_t first = k;
    while (first < end && (text[first] == '"' || text[first] == '(' || text[first] == '\'')) ++first;
    if (first >= end) continue;
    const char n = text[first];
    if (!is_upper_ascii(n) && std::isdigit(static_cast<unsigned char>(n)) == 0) continue;
    if (c == '.' && is_abbreviation(text, i)) continue;
    emit(start, j);
    start = k;
    i = k > 0 ? k - 1 : k;
  }
  emit(start, end);
}

// ---------------------------------------------------------------------------
// Pronoun resolution

const std::unordered_set<std::string>& subordinators() {
  static const std::unordered_set<std::string> kWords = {
      "if", "when", "whenever", "once", "where", "unless", "after", "before",
      "until", "while", "although", "though", "because", "since", "upon", "as",
      "in", "for", "on", "at", "during", "within", "with", "by", "under",
      "following", "prior", "otherwise", "however", "additionally", "finally",
      "then", "also", "moreover", "furthermore", "similarly", "likewise"};
  return kWords;
}

bool is_expletive_it(const std::vector<Token>& tokens, std::size_t at) {
  static const std::unordered_set<std::string> kCopula = {
      "is", "was", "'s", "be", "seems", "appears", "becomes", "isn't", "wasn't"};
  static const std::unordered_set<std::string> kModal = {
      "will", "would", "should", "may", "might", "must", "can", "could", "shall"};
  std::size_t j = at + 1;
  while (j < tokens.size() && !tokens[j].is_word) ++j;
  if (j >= tokens.size()) return false;
  if (kCopula.contains(tokens[j].lower)) return true;
  if (kModal.contains(tokens[j].lower)) {
    std::size_t k = j + 1;
    while (k < tokens.size() && (tokens[k].lower == "not" || !tokens[k].is_word)) ++k;
    return k < tokens.size() && tokens[k].lower == "be";
  }
  return false;
}

bool is_collective_head(std::string_view head) {
  static const std::unordered_set<std::string> kCollective = {
      "committee", "team",  "board", "council", "group",  "community", "project",
      "foundation", "organization", "tsc", "tc", "sig", "github", "body", "panel",
      "subcommittee", "sub-committee", "force", "meeting"};
  return kCollective.contains(std::string(head));
}

bool is_plural_head(std::string_view head) {
  return head.size() > 2 && head.back() == 's' && !head.ends_with("ss") && !head.ends_with("us") &&
         !head.ends_with("is");
}

bool agrees(std::string_view pronoun, std::string_view head) {
  const bool collective = is_collective_head(head);
  const bool plural = is_plural_head(head);
  if (pronoun == "they") return plural || collective;
  if (pronoun == "it") return collective && !plural;
  // he / she: one person
  return !plural && !collective;
}

// Subject positions: the first word, and the first word after the comma that
// closes a leading subordinate clause.
std::vector<std::size_t> subject_positions(const std::vector<Token>& tokens) {
  std::vector<std::size_t> out;
  std::size_t first = 0;
  while (first < tokens.size() && !tokens[first].is_word) ++first;
  if (first >= tokens.size()) return out;
  out.push_back(first);
  if (subordinators().contains(tokens[first].lower)) {
    for (std::size_t i = first + 1; i < tokens.size(); ++i) {
      if (tokens[i].text == ",") {
        std::size_t j = i + 1;
        while (j < tokens.size() && !tokens[j].is_word) ++j;
        if (j < tokens.size()) out.push_back(j);
        break;
      }
    }
  }
  return out;
}

struct Antecedent {
  std::string surface;
  bool sentence_initial = false;
};

std::optional<Antecedent> find_antecedent(std::string_view pronoun, const Sentence& source,
                                          const Lexicon& roles) {
  const auto tokens = tokenize(source.text);
  std::vector<std::size_t> word_index;
  std::vector<std::string> words;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!tokens[i].is_word) continue;
    word_index.push_back(i);
    words.push_back(tokens[i].lower);
  }
  for (const auto& m : roles.all_matches(words)) {
    const auto& head = words[m.first_word + m.word_count - 1];
    if (!agrees(pronoun, head)) continue;
    std::size_t first_tok = word_index[m.first_word];
    const std::size_t last_tok = word_index[m.first_word + m.word_count - 1];
    if (m.first_word > 0 && words[m.first_word - 1] == "the") first_tok = word_index[m.first_word - 1];
    Antecedent a;
    a.surface = std::string(slice(source.text, {tokens[first_tok].span.begin, tokens[last_tok].span.end}));
    a.sentence_initial = first_tok == word_index.front();
    return a;
  }
  return std::nullopt;
}

std::string fit_case(const Antecedent& a, bool capitalize) {
  std::string s = a.surface;
  if (s.empty()) return s;
  if (capitalize) {
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
  }
  // Undo sentence-initial capitalization of an ordinary word ("The", "Maintainers").
  const auto first_word_end = s.find_first_of(" -");
  const auto first_word = std::string_view(s).substr(0, first_word_end);
  const bool inner_upper = std::any_of(first_word.begin() + 1, first_word.end(),
                                       [](char c) { return is_upper_ascii(c); });
  if (a.sentence_initial && !inner_upper)
    s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  return s;
}

}  // namespace

Span NormalizedDoc::to_original(Span normalized) const {
  Span out{std::numeric_limits<std::size_t>::max(), 0};
  for (const auto& seg : offset_map) {
    const std::size_t b = std::max(seg.normalized.begin, normalized.begin);
    const std::size_t e = std::min(seg.normalized.end, normalized.end);
    if (b >= e) continue;
    out.begin = std::min(out.begin, seg.original.begin + (b - seg.normalized.begin));
    out.end = std::max(out.end, seg.original.begin + (e - seg.normalized.begin));
  }
  if (out.begin > out.end) return {};
  return out;
}

NormalizedDoc normalize_markup(std::string_view raw) { return MarkupNormalizer(raw).run(); }

NormalizedDoc segment(NormalizedDoc doc) {
  doc.sentences.clear();
  for (std::size_t bi = 0; bi < doc.blocks.size(); ++bi) {
    const TextBlock& block = doc.blocks[bi];
    if (block.kind == BlockKind::heading) continue;
    std::size_t line_start = block.span.begin;
    while (line_start < block.span.end) {
      std::size_t line_end = doc.text.find('\n', line_start);
      if (line_end == std::string::npos || line_end > block.span.end) line_end = block.span.end;
      std::size_t body = line_start;
      if (doc.text.compare(line_start, 2, "- ") == 0) body += 2;
      split_sentences(doc.text, body, line_end, bi, doc.sentences);
      line_start = line_end + 1;
    }
  }
  return doc;
}

NormalizedDoc resolve_pronouns(NormalizedDoc doc, const Lexicon& roles) {
  static const std::unordered_set<std::string> kPronouns = {"they", "he", "she", "it"};
  for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
    Sentence& sentence = doc.sentences[si];
    // Later positions first so earlier spans stay valid while editing.
    auto tokens = tokenize(sentence.text);
    auto positions = subject_positions(tokens);
    std::vector<PronounSubstitution> subs;
    std::string text = sentence.text;
    for (auto it = positions.rbegin(); it != positions.rend(); ++it) {
      const Token& tok = tokens[*it];
      if (!kPronouns.contains(tok.lower)) continue;
      if (tok.lower == "it" && is_expletive_it(tokens, *it)) continue;
      std::optional<Antecedent> found;
      for (std::size_t back = 1; back <= 2 && back <= si && !found; ++back) {
        const Sentence& prev = doc.sentences[si - back];
        if (prev.block_index != sentence.block_index) break;
        found = find_antecedent(tok.lower, prev, roles);
      }
      if (!found) continue;
      const bool capitalize = is_upper_ascii(tok.text.front());
      std::string replacement = fit_case(*found, capitalize);
      text.replace(tok.span.begin, tok.span.size(), replacement);
      const std::ptrdiff_t shift =
          static_cast<std::ptrdiff_t>(replacement.size()) - static_cast<std::ptrdiff_t>(tok.span.size());
      for (auto& s : subs) {
        s.span.begin = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(s.span.begin) + shift);
        s.span.end = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(s.span.end) + shift);
      }
      subs.push_back({{tok.span.begin, tok.span.begin + replacement.size()},
                      std::string(tok.text), replacement});
    }
    std::sort(subs.begin(), subs.end(),
              [](const auto& a, const auto& b) { return a.span.begin < b.span.begin; });
    sentence.text = std::move(text);
    sentence.substitutions = std::move(subs);
  }
  return doc;
}

std::string undo_substitutions(const Sentence& sentence) {
  std::string text = sentence.text;
  for (auto it = sentence.substitutions.rbegin(); it != sentence.substitutions.rend(); ++it)
    text.replace(it->span.begin, it->span.size(), it->pronoun);
  return text;
}

NormalizedDoc normalize_document(std::string_view raw, const Lexicon& roles) {
  return resolve_pronouns(segment(normalize_markup(raw)), roles);
}

bool is_valid_snapshot(std::string_view raw) {
  if (trim(raw).empty()) return false;
  return !segment(normalize_markup(raw)).sentences.empty();
}

}  // namespace govgram
