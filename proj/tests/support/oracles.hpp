#pragma once

// Reference implementations written independently of src/: different
// formulas, long double arithmetic, exhaustive enumeration.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace govgram::testing {

/// H = log2(N) - (1/N) * sum c log2 c over raw counts.
double oracle_entropy(const std::vector<std::size_t>& counts);

/// JSD = H(m) - (H(p) + H(q)) / 2 over aligned probability vectors.
double oracle_jsd(const std::vector<double>& p, const std::vector<double>& q);

std::size_t oracle_count_k(const std::vector<std::size_t>& counts, std::size_t tau);

/// Exact E[K(sample)] for a uniformly random n-subset of `labels`, by
/// enumerating every subset.
double oracle_expected_k(const std::vector<std::string>& labels, std::size_t n, std::size_t tau);

/// Exact E[K(latest sample)] - E[K(initial sample)] with n = min(sizes, cap).
double oracle_rarefied_delta_k(const std::vector<std::string>& initial,
                               const std::vector<std::string>& latest, std::size_t cap,
                               std::size_t tau);

/// Distribution of the replicate mean of a with-replacement resample of
/// `values`, by enumerating all n^n index tuples. value -> probability.
std::map<double, double> oracle_replicate_distribution(const std::vector<double>& values);

}  // namespace govgram::testing
