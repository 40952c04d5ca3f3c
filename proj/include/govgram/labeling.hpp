#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "govgram/ig_parser.hpp"
#include "govgram/taxonomy.hpp"

namespace govgram {

struct LabeledStatement {
  InstitutionalStatement statement;
  std::optional<RoleCategory> role_category;
  std::optional<ActionCategory> action_category;
  std::optional<DeonticStrength> deontic_strength;
  std::optional<DeonticPolarity> deontic_polarity;
};

DeonticPolarity deontic_binary(const DeonticType& deontic) noexcept;

/// Assigns taxonomy categories to one parsed statement.
class Labeler {
 public:
  virtual ~Labeler() = default;
  virtual LabeledStatement label(const InstitutionalStatement& statement) const = 0;
};

/// Labeling by the role and action lexicons.
class LexiconLabeler final : public Labeler {
 public:
  explicit LexiconLabeler(const TaxonomyLexicons& lexicons) : lexicons_(lexicons) {}
  LabeledStatement label(const InstitutionalStatement& statement) const override;

 private:
  const TaxonomyLexicons& lexicons_;
};

std::vector<LabeledStatement> label_all(std::span<const InstitutionalStatement> statements,
                                        const Labeler& labeler);

/// Fraction of role-bearing statements that received a role category.
/// 1.0 when no statement carries a role.
double role_coverage(std::span<const LabeledStatement> labeled);

struct ReliabilityReport {
  std::size_t n_items = 0;
  double percent_agreement = 0.0;  // 0..100
  double cohens_kappa = 0.0;
  std::size_t n_labels = 0;  // distinct labels used by either coder
};

/// Agreement between two coders over paired labels. An empty string is a
/// valid (null) label. Throws InferenceError on empty or unequal input.
ReliabilityReport cohens_kappa(std::span<const std::string> coder_a,
                               std::span<const std::string> coder_b);

/// Reads `item<TAB>label` files and compares the first `sample` items that
/// both coders labeled, in coder A's order.
ReliabilityReport reliability_from_files(const std::string& coder_a_path,
                                         const std::string& coder_b_path, std::size_t sample);

}  // namespace govgram
