#pragma once

#include <cstdint>
#include <vector>

#include "kbald/acquisition.hpp"
#include "kbald/bald_scores.hpp"
#include "kbald/tensor.hpp"

namespace kbald {

// Incrementally extended joint predictive for a partial batch: an
// S x C^{|batch|} table of per-sample configuration probabilities
// prod_m p(y_m | x_m, omega_s), plus the running conditional-entropy sum.
// Linear-space storage; extension is a broadcast multiply.
struct JointPredictiveState {
  std::vector<std::size_t> batch;
  std::size_t n_samples = 0;
  std::size_t n_classes = 0;
  std::vector<double> table;  // [s][config], config count = C^{|batch|}
  double conditional_entropy_sum = 0.0;

  static JointPredictiveState empty(const LogProbTensor& t);

  std::size_t n_configs() const {
    return batch.empty() ? 1 : table.size() / n_samples;
  }

  // New state with point i appended (new point varies fastest).
  // Throws InfeasibleError past the cap; throws if any per-sample row
  // mass has drifted below 1e-300.
  JointPredictiveState extend(const LogProbTensor& t, std::size_t i,
                              std::size_t cap = kDefaultEnumerationCap) const;

  // H[Y_1..Y_k | x] of the current batch (entropy of the sample-averaged
  // table).
  double joint_entropy() const;

  // Joint BALD score of the current batch.
  double score() const { return joint_entropy() - conditional_entropy_sum; }

  // Sample-averaged joint predictive, for cross-checks.
  Distribution averaged() const;
};

struct GreedyTraceStep {
  std::size_t chosen = 0;
  double gain = 0.0;  // nats
  double scoring_seconds = 0.0;
};

struct GreedyTrace {
  std::vector<GreedyTraceStep> steps;
};

// Greedy BatchBALD: at each step scores every remaining candidate by the
// joint BALD score of batch + {candidate} and picks the argmax, ties to
// the lowest pool index. Candidate scoring may run on several threads;
// the argmax reduction is index-ordered, so the result is independent of
// the thread count.
AcquisitionResult greedy_batchbald(const LogProbTensor& t,
                                   const std::vector<std::size_t>& pool,
                                   std::size_t b,
                                   const ScoreMode& mode = ScoreMode::exact(),
                                   GreedyTrace* trace = nullptr,
                                   unsigned threads = 1);

}  // namespace kbald
