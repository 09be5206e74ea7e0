#pragma once

#include <cstddef>
#include <vector>

#include "kbald/tensor.hpp"

namespace kbald::oracle {

// Brute-force reference implementations used only by tests and the
// `verify` CLI subcommand. Deliberately share no kernels with the
// production modules: entropies are built by direct nested iteration
// over label configurations, single-threaded.

// Exact joint mutual information I[Y_1..Y_B; Omega] by full enumeration.
double exact_joint_mi(const LogProbTensor& t,
                      const std::vector<std::size_t>& subset);

// Exact joint entropy H[Y_1..Y_B] by full enumeration.
double exact_joint_entropy(const LogProbTensor& t,
                           const std::vector<std::size_t>& subset);

// Alternating inclusion-exclusion series of the joint MI with partial
// sums and residuals per truncation order.
struct IdentityReport {
  double exact_mi = 0.0;
  std::vector<double> partial_sums;  // order 1..B truncations
  std::vector<double> residuals;     // |partial_sums[k-1] - exact_mi|
};

IdentityReport inclusion_exclusion_series(const LogProbTensor& t,
                                          const std::vector<std::size_t>& subset);

// Exact argmax of the joint BALD score over all size-b subsets of the
// pool; ties go to the lexicographically smallest index tuple.
struct OptimalBatch {
  std::vector<std::size_t> subset;
  double score = 0.0;
};

OptimalBatch exhaustive_optimal_batch(const LogProbTensor& t,
                                      const std::vector<std::size_t>& pool,
                                      std::size_t b);

}  // namespace kbald::oracle
