#include "kbald/bald_scores.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kbald/common.hpp"

namespace kbald {

double bald(const LogProbTensor& t, std::size_t i) {
  return entropy(marginal_predictive(t, i)) - mean_conditional_entropy(t, i);
}

namespace {

double joint_entropy_exact(const LogProbTensor& t,
                           const std::vector<std::size_t>& subset,
                           std::size_t cap, bool allow_duplicates) {
  return entropy(joint_predictive(t, subset, cap, allow_duplicates));
}

// Enumerate nonempty sub-subsets of `subset` with alternating signs.
double alternating_entropy_sum(const LogProbTensor& t,
                               const std::vector<std::size_t>& subset,
                               std::size_t cap, bool allow_duplicates) {
  const std::size_t B = subset.size();
  if (B > 20)
    throw InfeasibleError("interaction_info: subset too large (2^B terms)");
  double acc = 0.0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << B); ++mask) {
    std::vector<std::size_t> sub;
    for (std::size_t j = 0; j < B; ++j)
      if (mask & (std::size_t{1} << j)) sub.push_back(subset[j]);
    double h = joint_entropy_exact(t, sub, cap, allow_duplicates);
    acc += (sub.size() % 2 == 1) ? h : -h;
  }
  return acc;
}

// lexicographic order on row contents; content ordering (rather than
// index ordering) keeps MI bit-identical across exact-duplicate rows at
// different pool positions
bool row_content_less(const LogProbTensor& t, std::size_t i, std::size_t j) {
  for (std::size_t s = 0; s < t.n_samples; ++s)
    for (std::size_t c = 0; c < t.n_classes; ++c) {
      double a = t.at(i, s, c), b = t.at(j, s, c);
      if (a != b) return a < b;
    }
  return i < j;
}

}  // namespace

double pairwise_mi(const LogProbTensor& t, std::size_t i, std::size_t j,
                   bool allow_duplicates) {
  if (i == j && !allow_duplicates)
    throw ValidationError("pairwise_mi: i == j requires the duplicate flag");
  // canonical pair order, so mi(i, j) and mi(j, i) are bit-identical
  std::size_t lo = i, hi = j;
  if (row_content_less(t, hi, lo)) std::swap(lo, hi);
  double h_i = entropy(marginal_predictive(t, lo));
  double h_j = entropy(marginal_predictive(t, hi));
  double h_ij = joint_entropy_exact(t, {lo, hi}, kDefaultEnumerationCap, true);
  double mi = h_i + h_j - h_ij;
  if (mi < 0.0) {
    if (mi < -1e-9)
      throw std::logic_error("pairwise_mi: negative value " +
                             std::to_string(mi) +
                             " beyond floating-point tolerance");
    mi = 0.0;
  }
  return mi;
}

double interaction_info(const LogProbTensor& t,
                        const std::vector<std::size_t>& subset,
                        std::size_t cap, bool allow_duplicates) {
  detail::check_subset(t, subset, allow_duplicates);
  if (subset.size() < 2)
    throw ValidationError("interaction_info: need |subset| >= 2");
  return alternating_entropy_sum(t, subset, cap, allow_duplicates);
}

double batchbald_score(const LogProbTensor& t,
                       const std::vector<std::size_t>& subset,
                       const ScoreMode& mode, bool allow_duplicates) {
  detail::check_subset(t, subset, allow_duplicates);
  double h_joint;
  if (mode.kind == ScoreMode::Kind::Exact)
    h_joint = joint_entropy_exact(t, subset, mode.cap, allow_duplicates);
  else
    h_joint = mc_joint_entropy(t, subset, mode.mc_samples, mode.seed,
                               allow_duplicates);
  double cond = 0.0;
  for (std::size_t i : subset) cond += mean_conditional_entropy(t, i);
  return h_joint - cond;
}

double kbald_score(const LogProbTensor& t,
                   const std::vector<std::size_t>& subset, int k,
                   bool allow_duplicates) {
  detail::check_subset(t, subset, allow_duplicates);
  if (k < 1 || k > 3) throw ValidationError("kbald_score: k must be in 1..3");
  const std::size_t B = subset.size();
  double score = 0.0;
  for (std::size_t i : subset) score += bald(t, i);
  if (k >= 2) {
    for (std::size_t a = 0; a < B; ++a)
      for (std::size_t b = a + 1; b < B; ++b)
        score -= pairwise_mi(t, subset[a], subset[b], true);
  }
  if (k >= 3) {
    for (std::size_t a = 0; a < B; ++a)
      for (std::size_t b = a + 1; b < B; ++b)
        for (std::size_t c = b + 1; c < B; ++c)
          score += interaction_info(t, {subset[a], subset[b], subset[c]},
                                    kDefaultEnumerationCap, true);
  }
  return score;
}

double total_correlation(const LogProbTensor& t,
                         const std::vector<std::size_t>& subset,
                         std::size_t cap, bool allow_duplicates) {
  detail::check_subset(t, subset, allow_duplicates);
  double sum_marginal = 0.0;
  for (std::size_t i : subset) sum_marginal += entropy(marginal_predictive(t, i));
  return sum_marginal - joint_entropy_exact(t, subset, cap, allow_duplicates);
}

double tc_kwise_approx(const LogProbTensor& t,
                       const std::vector<std::size_t>& subset, int k,
                       std::size_t cap, bool allow_duplicates) {
  detail::check_subset(t, subset, allow_duplicates);
  if (k < 1) throw ValidationError("tc_kwise_approx: k must be >= 1");
  const std::size_t B = subset.size();
  double acc = 0.0;
  // sum over interaction orders 2..k of (-1)^order of the order terms:
  // + pairwise, - triples, + quadruples, ...
  std::vector<std::size_t> combo;
  for (int order = 2; order <= k && order <= static_cast<int>(B); ++order) {
    double sign = (order % 2 == 0) ? 1.0 : -1.0;
    // iterate all order-sized combinations of subset
    std::vector<std::size_t> idx(order);
    for (int j = 0; j < order; ++j) idx[j] = j;
    while (true) {
      combo.clear();
      for (int j = 0; j < order; ++j) combo.push_back(subset[idx[j]]);
      acc += sign * interaction_info(t, combo, cap, true);
      int j = order - 1;
      while (j >= 0 && idx[j] == B - order + j) --j;
      if (j < 0) break;
      ++idx[j];
      for (int l = j + 1; l < order; ++l) idx[l] = idx[l - 1] + 1;
    }
  }
  return acc;
}

std::vector<std::vector<double>> pairwise_mi_against_set(
    const LogProbTensor& t, const std::vector<std::size_t>& candidates,
    const std::vector<std::size_t>& acquired, std::size_t* mi_eval_counter) {
  std::vector<std::vector<double>> out(acquired.size());
  for (std::size_t a = 0; a < acquired.size(); ++a) {
    out[a].resize(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      out[a][c] = pairwise_mi(t, acquired[a], candidates[c], true);
      if (mi_eval_counter) ++(*mi_eval_counter);
    }
  }
  return out;
}

}  // namespace kbald
