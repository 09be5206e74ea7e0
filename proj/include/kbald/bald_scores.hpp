#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kbald/prob_core.hpp"
#include "kbald/tensor.hpp"

namespace kbald {

// How to evaluate a joint entropy: exact enumeration (default) or the
// Monte-Carlo plug-in estimator. Exact mode never silently falls back.
struct ScoreMode {
  enum class Kind { Exact, Mc } kind = Kind::Exact;
  std::size_t mc_samples = 0;
  std::uint64_t seed = 0;
  std::size_t cap = kDefaultEnumerationCap;

  static ScoreMode exact(std::size_t cap = kDefaultEnumerationCap) {
    return {Kind::Exact, 0, 0, cap};
  }
  static ScoreMode mc(std::size_t m, std::uint64_t seed) {
    return {Kind::Mc, m, seed, kDefaultEnumerationCap};
  }
};

// Symmetric cache of I[Y_i; Y_j] over a set of pool indices.
struct PairwiseMIMatrix {
  std::vector<std::size_t> indices;
  std::vector<std::vector<double>> values;  // values[a][b], symmetric
};

// Per-point scores with a method tag, for CSV emission.
struct ScoreReport {
  std::string method;
  std::vector<std::size_t> indices;
  std::vector<double> scores;  // nats
  double wall_seconds = 0.0;
};

// BALD score I[Omega; Y_i | x_i] = H[Y_i|x_i] - (1/S) sum_s H[p(.|x_i, omega_s)].
double bald(const LogProbTensor& t, std::size_t i);

// Pairwise mutual information I[Y_i; Y_j] = H_i + H_j - H_ij via exact
// enumeration. Values in (-1e-9, 0) clamp to 0; larger negatives raise
// an internal-consistency error.
double pairwise_mi(const LogProbTensor& t, std::size_t i, std::size_t j,
                   bool allow_duplicates = false);

// Co-information of the subset: sum over nonempty T of (-1)^{|T|+1} H[Y_T],
// signed so that the alternating joint-entropy decomposition holds as
// written. Reduces to pairwise_mi at |subset| = 2; may be negative for
// |subset| >= 3.
double interaction_info(const LogProbTensor& t,
                        const std::vector<std::size_t>& subset,
                        std::size_t cap = kDefaultEnumerationCap,
                        bool allow_duplicates = false);

// Joint BALD score I[Omega; Y_1..Y_k] = H[Y_1..Y_k] - sum_i H[Y_i | Omega].
double batchbald_score(const LogProbTensor& t,
                       const std::vector<std::size_t>& subset,
                       const ScoreMode& mode = ScoreMode::exact(),
                       bool allow_duplicates = false);

// Order-k truncation of the inclusion-exclusion expansion of the joint
// BALD score: sum bald_i - sum I_2 (+ sum I_3 for k = 3). No clamping;
// values may be negative.
double kbald_score(const LogProbTensor& t,
                   const std::vector<std::size_t>& subset, int k,
                   bool allow_duplicates = false);

// Total correlation sum H_i - H_joint (exact enumeration), and its
// k-wise truncation sum I_2 - sum I_3 + ... up to order k.
double total_correlation(const LogProbTensor& t,
                         const std::vector<std::size_t>& subset,
                         std::size_t cap = kDefaultEnumerationCap,
                         bool allow_duplicates = false);
double tc_kwise_approx(const LogProbTensor& t,
                       const std::vector<std::size_t>& subset, int k,
                       std::size_t cap = kDefaultEnumerationCap,
                       bool allow_duplicates = false);

// |acquired| x |candidates| matrix of pairwise MI between acquired and
// candidate points; the incremental cache behind greedy 2-BALD.
// mi_eval_counter, when given, is incremented once per entry computed.
std::vector<std::vector<double>> pairwise_mi_against_set(
    const LogProbTensor& t, const std::vector<std::size_t>& candidates,
    const std::vector<std::size_t>& acquired,
    std::size_t* mi_eval_counter = nullptr);

}  // namespace kbald
