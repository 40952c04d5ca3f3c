#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "govgram/normalize.hpp"
#include "govgram/taxonomy.hpp"
#include "govgram/text_util.hpp"

namespace govgram {

enum class Modal : std::uint8_t { may, can, could, should, shall, must, will, would };
enum class DeonticStrength : std::uint8_t { permissive, advisory, obligatory };
enum class DeonticPolarity : std::uint8_t { enabling, restricting };

inline constexpr std::array<std::string_view, 8> kModalNames = {
    "may", "can", "could", "should", "shall", "must", "will", "would"};
inline constexpr std::array<std::string_view, 3> kDeonticStrengthNames = {
    "permissive", "advisory", "obligatory"};
inline constexpr std::array<std::string_view, 2> kDeonticPolarityNames = {
    "enabling", "restricting"};

std::string_view to_string(Modal m) noexcept;
std::string_view to_string(DeonticStrength s) noexcept;
std::string_view to_string(DeonticPolarity p) noexcept;
std::optional<Modal> parse_modal(std::string_view name) noexcept;
std::optional<DeonticStrength> parse_deontic_strength(std::string_view name) noexcept;
std::optional<DeonticPolarity> parse_deontic_polarity(std::string_view name) noexcept;

struct DeonticType {
  Modal modal = Modal::may;
  bool negated = false;

  /// {may, can, could} permissive; {should, would} advisory; {must, shall, will} obligatory.
  DeonticStrength strength() const noexcept;
  /// Negated modals restrict, everything else enables.
  DeonticPolarity polarity() const noexcept { return negated ? DeonticPolarity::restricting : DeonticPolarity::enabling; }
  /// "must", "may not", "cannot".
  std::string surface() const;

  friend bool operator==(const DeonticType&, const DeonticType&) = default;
};

/// Closed-set canonicalization; anything outside the eight modals is absent.
std::optional<DeonticType> canonicalize_deontic(std::string_view modal_surface, bool negated);

/// Parses "may", "may not", "cannot", "can't", "won't" back into a deontic.
std::optional<DeonticType> parse_deontic_surface(std::string_view surface);

struct SentenceRef {
  std::string repo_id;
  Snapshot snapshot = Snapshot::initial;
  std::size_t sentence = 0;
  std::size_t clause = 0;  // coordinated verb groups of one sentence

  friend bool operator==(const SentenceRef&, const SentenceRef&) = default;
};

struct InstitutionalStatement {
  SentenceRef ref;
  std::string sentence_text;
  std::optional<std::string> role_text;
  std::optional<Span> role_span;
  std::optional<DeonticType> deontic;
  std::optional<Span> deontic_span;
  std::optional<std::string> action_lemma;
  std::optional<Span> action_span;
  std::optional<std::string> object_text;
  std::optional<Span> object_span;
};

/// Suffix-stripping lemmatizer with an irregulars table. Candidates are
/// checked against known verb lemmas; when none is known the plain suffix
/// rule applies.
std::string lemmatize_verb(std::string_view surface);

/// Base forms the parser recognizes as verbs (built-in list plus every
/// single-word action lexicon entry).
class VerbInventory {
 public:
  explicit VerbInventory(const Lexicon* actions = nullptr);
  bool contains(std::string_view lemma) const;
  std::string lemmatize(std::string_view surface) const;

 private:
  std::vector<std::string> extra_;
};

/// Parses one sentence. Coordinated verb groups ("may merge and must
/// document") yield additional statements sharing the subject; the first
/// returned statement always has clause 0. Sentences with no recognizable
/// structure yield one statement with every component absent.
std::vector<InstitutionalStatement> parse_sentence(const Sentence& sentence, SentenceRef ref,
                                                   const TaxonomyLexicons& lexicons);

/// First statement of parse_sentence.
InstitutionalStatement parse_statement(const Sentence& sentence, const TaxonomyLexicons& lexicons);

/// All statements of a normalized document, in sentence order.
std::vector<InstitutionalStatement> parse_document(const NormalizedDoc& doc,
                                                   const TaxonomyLexicons& lexicons);

}  // namespace govgram
