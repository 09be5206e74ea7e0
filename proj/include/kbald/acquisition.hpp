#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace kbald {

enum class StopReason {
  BudgetExhausted,
  DynamicDivergence,
  ConservativePoolEmpty,
};

std::string to_string(StopReason r);

// Output of any batch-acquisition routine: the ordered picks, the score
// trace behind them, and a wall-time breakdown.
struct AcquisitionResult {
  std::string method;
  std::vector<std::size_t> indices;        // acquisition order
  std::vector<double> step_scores;         // incremental score per step (nats)
  std::vector<double> cumulative_scores;   // batch score of each prefix
  StopReason stop_reason = StopReason::BudgetExhausted;
  double bald_pass_seconds = 0.0;
  double mi_pass_seconds = 0.0;
  double total_seconds = 0.0;
  std::size_t mi_pair_evals = 0;           // fresh pairwise-MI evaluations
  // per-step extras for dynamic stopping analysis (empty otherwise)
  std::vector<double> score2_trace;
  std::vector<double> score3_trace;
};

}  // namespace kbald
