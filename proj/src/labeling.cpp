#include "govgram/labeling.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "govgram/error.hpp"
#include "govgram/text_util.hpp"

namespace govgram {

DeonticPolarity deontic_binary(const DeonticType& deontic) noexcept { return deontic.polarity(); }

LabeledStatement LexiconLabeler::label(const InstitutionalStatement& statement) const {
  LabeledStatement out;
  out.statement = statement;
  if (statement.role_text) out.role_category = normalize_role(*statement.role_text, lexicons_.roles);
  if (statement.action_lemma)
    out.action_category =
        categorize_action(*statement.action_lemma, statement.sentence_text, lexicons_.actions);
  if (statement.deontic) {
    out.deontic_strength = statement.deontic->strength();
    out.deontic_polarity = deontic_binary(*statement.deontic);
  }
  return out;
}

std::vector<LabeledStatement> label_all(std::span<const InstitutionalStatement> statements,
                                        const Labeler& labeler) {
  std::vector<LabeledStatement> out;
  out.reserve(statements.size());
  for (const auto& s : statements) out.push_back(labeler.label(s));
  return out;
}

double role_coverage(std::span<const LabeledStatement> labeled) {
  std::size_t with_role = 0;
  std::size_t categorized = 0;
  for (const auto& l : labeled) {
    if (!l.statement.role_text) continue;
    ++with_role;
    if (l.role_category) ++categorized;
  }
  return with_role == 0 ? 1.0 : static_cast<double>(categorized) / static_cast<double>(with_role);
}

ReliabilityReport cohens_kappa(std::span<const std::string> coder_a,
                               std::span<const std::string> coder_b) {
  if (coder_a.size() != coder_b.size())
    throw InferenceError("coders labeled different numbers of items");
  if (coder_a.empty()) throw InferenceError("no items to compare");
  const auto n = static_cast<double>(coder_a.size());
  std::map<std::string, double> marginal_a;
  std::map<std::string, double> marginal_b;
  std::set<std::string> labels;
  double agree = 0;
  for (std::size_t i = 0; i < coder_a.size(); ++i) {
    if (coder_a[i] == coder_b[i]) ++agree;
    marginal_a[coder_a[i]] += 1;
    marginal_b[coder_b[i]] += 1;
    labels.insert(coder_a[i]);
    labels.insert(coder_b[i]);
  }
  const double observed = agree / n;
  double expected = 0;
  for (const auto& label : labels) {
    const auto a = marginal_a.count(label) ? marginal_a[label] : 0.0;
    const auto b = marginal_b.count(label) ? marginal_b[label] : 0.0;
    expected += (a / n) * (b / n);
  }
  ReliabilityReport r;
  r.n_items = coder_a.size();
  r.percent_agreement = observed * 100.0;
  r.n_labels = labels.size();
  // Both coders used a single identical label: agreement is perfect by construction.
  r.cohens_kappa = expected >= 1.0 ? 1.0 : (observed - expected) / (1.0 - expected);
  return r;
}

namespace {

std::vector<std::pair<std::string, std::string>> read_coding(const std::string& path) {
  std::vector<std::pair<std::string, std::string>> rows;
  std::size_t line_no = 0;
  const auto content = read_file(path);
  for (auto line : split(content, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.empty() || trim(fields[0]).empty())
      throw FormatError(path + ":" + std::to_string(line_no) + ": expected item<TAB>label");
    rows.emplace_back(std::string(trim(fields[0])),
                      fields.size() > 1 ? std::string(trim(fields[1])) : std::string());
  }
  return rows;
}

}  // namespace

ReliabilityReport reliability_from_files(const std::string& coder_a_path,
                                         const std::string& coder_b_path, std::size_t sample) {
  const auto a = read_coding(coder_a_path);
  const auto b = read_coding(coder_b_path);
  std::map<std::string, std::string> b_by_item(b.begin(), b.end());
  std::vector<std::string> la;
  std::vector<std::string> lb;
  for (const auto& [item, label] : a) {
    if (la.size() == sample) break;
    const auto it = b_by_item.find(item);
    if (it == b_by_item.end()) continue;
    la.push_back(label);
    lb.push_back(it->second);
  }
  if (la.size() < sample)
    throw InferenceError("only " + std::to_string(la.size()) + " items coded by both coders; need " +
                         std::to_string(sample));
  return cohens_kappa(la, lb);
}

}  // namespace govgram
