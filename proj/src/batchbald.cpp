#include "kbald/batchbald.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "kbald/common.hpp"
#include "kbald/parallel.hpp"
#include "kbald/prob_core.hpp"

namespace kbald {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t step,
                       std::uint64_t candidate) {
  // splitmix64 over a combined key
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (step * 1000003ULL + candidate + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

JointPredictiveState JointPredictiveState::empty(const LogProbTensor& t) {
  JointPredictiveState st;
  st.n_samples = t.n_samples;
  st.n_classes = t.n_classes;
  st.table.assign(t.n_samples, 1.0);  // one configuration, probability 1
  return st;
}

JointPredictiveState JointPredictiveState::extend(const LogProbTensor& t,
                                                  std::size_t i,
                                                  std::size_t cap) const {
  if (i >= t.n_points)
    throw ValidationError("extend: point index out of range");
  const std::size_t S = n_samples, C = n_classes;
  const std::size_t old_configs = n_configs();
  if (old_configs > cap / C)
    throw InfeasibleError(
        "extend: joint table would exceed the enumeration cap; use the "
        "Monte-Carlo mode");
  JointPredictiveState next;
  next.batch = batch;
  next.batch.push_back(i);
  next.n_samples = S;
  next.n_classes = C;
  next.table.resize(S * old_configs * C);
  for (std::size_t s = 0; s < S; ++s) {
    auto r = t.row(i, s);
    double row_mass = 0.0;
    for (std::size_t q = 0; q < old_configs; ++q) {
      double base = table[s * old_configs + q];
      for (std::size_t c = 0; c < C; ++c) {
        double v = base * std::exp(r[c]);
        next.table[(s * old_configs + q) * C + c] = v;
        row_mass += v;
      }
    }
    if (row_mass < 1e-300)
      throw std::runtime_error(
          "extend: per-sample configuration mass underflowed");
  }
  next.conditional_entropy_sum =
      conditional_entropy_sum + mean_conditional_entropy(t, i);
  return next;
}

double JointPredictiveState::joint_entropy() const {
  const std::size_t S = n_samples, Q = n_configs();
  const double inv_s = 1.0 / static_cast<double>(S);
  double h = 0.0;
  for (std::size_t q = 0; q < Q; ++q) {
    double p = 0.0;
    for (std::size_t s = 0; s < S; ++s) p += table[s * Q + q];
    p *= inv_s;
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

Distribution JointPredictiveState::averaged() const {
  const std::size_t S = n_samples, Q = n_configs();
  Distribution d;
  d.probs.assign(Q, 0.0);
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t q = 0; q < Q; ++q) d.probs[q] += table[s * Q + q];
  for (double& p : d.probs) p /= static_cast<double>(S);
  return d;
}

AcquisitionResult greedy_batchbald(const LogProbTensor& t,
                                   const std::vector<std::size_t>& pool,
                                   std::size_t b, const ScoreMode& mode,
                                   GreedyTrace* trace, unsigned threads) {
  if (b > pool.size())
    throw ValidationError("greedy_batchbald: b exceeds pool size");
  detail::check_subset(t, pool, true);

  auto t0 = Clock::now();
  AcquisitionResult result;
  result.method =
      mode.kind == ScoreMode::Kind::Exact ? "batchbald-exact" : "batchbald-mc";

  std::vector<double> cond_entropy(pool.size());
  for (std::size_t p = 0; p < pool.size(); ++p)
    cond_entropy[p] = mean_conditional_entropy(t, pool[p]);

  std::vector<bool> taken(pool.size(), false);
  JointPredictiveState state = JointPredictiveState::empty(t);
  std::vector<std::size_t> batch_subset;
  double prev_score = 0.0;

  for (std::size_t step = 0; step < b; ++step) {
    auto step_t0 = Clock::now();
    std::vector<double> scores(pool.size(),
                               -std::numeric_limits<double>::infinity());
    if (mode.kind == ScoreMode::Kind::Exact) {
      parallel_for(pool.size(), threads, [&](std::size_t p) {
        if (taken[p]) return;
        scores[p] = state.extend(t, pool[p], mode.cap).score();
      });
    } else {
      parallel_for(pool.size(), threads, [&](std::size_t p) {
        if (taken[p]) return;
        std::vector<std::size_t> subset = batch_subset;
        subset.push_back(pool[p]);
        double h = mc_joint_entropy(t, subset, mode.mc_samples,
                                    mix_seed(mode.seed, step, pool[p]), true);
        scores[p] = h - (state.conditional_entropy_sum + cond_entropy[p]);
      });
    }
    // index-ordered argmax; ties go to the lowest pool index
    std::size_t best = pool.size();
    for (std::size_t p = 0; p < pool.size(); ++p) {
      if (taken[p]) continue;
      if (best == pool.size() || scores[p] > scores[best] ||
          (scores[p] == scores[best] && pool[p] < pool[best]))
        best = p;
    }
    taken[best] = true;
    batch_subset.push_back(pool[best]);
    if (mode.kind == ScoreMode::Kind::Exact)
      state = state.extend(t, pool[best], mode.cap);
    else
      state.conditional_entropy_sum += cond_entropy[best];

    double gain = scores[best] - prev_score;
    prev_score = scores[best];
    result.indices.push_back(pool[best]);
    result.step_scores.push_back(gain);
    result.cumulative_scores.push_back(scores[best]);
    if (trace)
      trace->steps.push_back({pool[best], gain, seconds_since(step_t0)});
  }
  result.total_seconds = seconds_since(t0);
  return result;
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::BudgetExhausted: return "budget-exhausted";
    case StopReason::DynamicDivergence: return "dynamic-divergence";
    case StopReason::ConservativePoolEmpty: return "conservative-pool-empty";
  }
  return "unknown";
}

}  // namespace kbald
