#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kbald/acquisition.hpp"
#include "kbald/tensor.hpp"

namespace kbald {

// Stop growing the batch once the cumulative 2-BALD and 3-BALD prefix
// scores diverge by more than the threshold. Either an absolute
// threshold in nats or a fraction of the current cumulative 2-BALD
// score (relative, the default at 0.10).
struct DynamicStopConfig {
  std::optional<double> tau_abs;   // nats
  double tau_rel = 0.10;           // used when tau_abs is unset
  std::size_t max_batch = 10;
};

// Conservative acquisition: pick the top BALD scorer, drop every
// remaining pool point whose pairwise MI with it exceeds theta (or, in
// budget mode, stop once the running max pairwise MI among picks
// exceeds the budget).
struct ConservativeConfig {
  std::optional<double> theta;   // exclusion threshold (nats)
  std::optional<double> budget;  // max-pairwise-MI budget (nats)
};

// Greedy k-BALD (k = 1..3). BALD scores are computed once up front; each
// step only evaluates MI terms of the candidates against the already
// acquired points, which is what keeps 2-BALD at O(b * N) MI evaluations.
// Incremental scores may be negative and are recorded unclamped.
AcquisitionResult greedy_kbald(const LogProbTensor& t,
                               const std::vector<std::size_t>& pool,
                               std::size_t b, int k, unsigned threads = 1);

// Greedy 2-BALD with the 2-vs-3 divergence stopping rule. Both prefix
// scores are recorded per step; the returned batch is the prefix before
// the violating step.
AcquisitionResult greedy_kbald_dynamic(const LogProbTensor& t,
                                       const std::vector<std::size_t>& pool,
                                       const DynamicStopConfig& cfg,
                                       unsigned threads = 1);

AcquisitionResult conservative_acquire(const LogProbTensor& t,
                                       const std::vector<std::size_t>& pool,
                                       std::size_t b,
                                       const ConservativeConfig& cfg);

}  // namespace kbald
