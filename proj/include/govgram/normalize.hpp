#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "govgram/taxonomy.hpp"
#include "govgram/text_util.hpp"

namespace govgram {

enum class Snapshot { initial, latest };

std::string_view to_string(Snapshot s) noexcept;
std::optional<Snapshot> parse_snapshot(std::string_view name) noexcept;

enum class BlockKind { text, heading };

/// A blank-line separated unit of normalized text. Text blocks hold one line
/// per list item ("- item") or prose paragraph.
struct TextBlock {
  std::string text;
  BlockKind kind = BlockKind::text;
  Span span;  // position in NormalizedDoc::text
};

/// Contiguous run of normalized characters copied verbatim from the raw text.
struct OffsetSegment {
  Span normalized;
  Span original;
};

struct PronounSubstitution {
  Span span;  // antecedent position in the substituted sentence text
  std::string pronoun;
  std::string antecedent;
};

struct Sentence {
  std::string text;
  std::size_t block_index = 0;
  Span char_span;  // pre-substitution position in NormalizedDoc::text
  std::vector<PronounSubstitution> substitutions;
};

struct NormalizedDoc {
  std::string repo_id;
  Snapshot snapshot = Snapshot::initial;
  std::string text;  // blocks joined by blank lines
  std::vector<TextBlock> blocks;
  std::vector<Sentence> sentences;
  std::size_t section_count = 0;
  std::vector<OffsetSegment> offset_map;

  /// Smallest raw span covering every mapped character of `normalized`.
  /// Empty when the range holds only synthesized characters.
  Span to_original(Span normalized) const;
};

/// Strips badges, images, HTML and inline markup, converts pipe tables to
/// bullet lists and records headings. Unrecognized markup passes through.
NormalizedDoc normalize_markup(std::string_view raw);

/// Splits text blocks into sentences. List items are sentences of their own
/// and split further only on terminal punctuation.
NormalizedDoc segment(NormalizedDoc doc);

/// Replaces subject-position third-person pronouns with the closest role
/// phrase found in the previous two sentences of the same block.
NormalizedDoc resolve_pronouns(NormalizedDoc doc, const Lexicon& roles);

/// The sentence text with every recorded substitution undone.
std::string undo_substitutions(const Sentence& sentence);

/// normalize_markup + segment + resolve_pronouns.
NormalizedDoc normalize_document(std::string_view raw, const Lexicon& roles);

/// Non-empty after markup stripping and holding at least one sentence.
bool is_valid_snapshot(std::string_view raw);

}  // namespace govgram
