#include "kbald/kbald_acquire.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "kbald/bald_scores.hpp"
#include "kbald/common.hpp"
#include "kbald/parallel.hpp"
#include "kbald/prob_core.hpp"

namespace kbald {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// index-ordered argmax over the non-taken slots; ties to the lowest
// pool index
std::size_t argmax_slot(const std::vector<double>& scores,
                        const std::vector<bool>& taken,
                        const std::vector<std::size_t>& pool) {
  std::size_t best = pool.size();
  for (std::size_t p = 0; p < pool.size(); ++p) {
    if (taken[p]) continue;
    if (best == pool.size() || scores[p] > scores[best] ||
        (scores[p] == scores[best] && pool[p] < pool[best]))
      best = p;
  }
  return best;
}

struct KbaldGreedyState {
  std::vector<double> bald_scores;
  std::vector<double> mi_sum;      // sum of I2 against acquired, per slot
  std::vector<double> triple_sum;  // sum of I3 over acquired pairs, per slot
  std::vector<bool> taken;
};

}  // namespace

AcquisitionResult greedy_kbald(const LogProbTensor& t,
                               const std::vector<std::size_t>& pool,
                               std::size_t b, int k, unsigned threads) {
  if (b > pool.size())
    throw ValidationError("greedy_kbald: b exceeds pool size");
  if (k < 1 || k > 3) throw ValidationError("greedy_kbald: k must be in 1..3");
  detail::check_subset(t, pool, true);

  auto t0 = Clock::now();
  AcquisitionResult result;
  result.method = "kbald-" + std::to_string(k);

  const std::size_t n = pool.size();
  std::vector<double> bald_scores(n);
  parallel_for(n, threads,
               [&](std::size_t p) { bald_scores[p] = bald(t, pool[p]); });
  result.bald_pass_seconds = seconds_since(t0);

  std::vector<double> mi_sum(n, 0.0), triple_sum(n, 0.0);
  std::vector<bool> taken(n, false);
  std::vector<std::size_t> acquired_slots;
  double cumulative = 0.0;
  auto mi_t0 = Clock::now();

  for (std::size_t step = 0; step < b; ++step) {
    std::vector<double> scores(n, -std::numeric_limits<double>::infinity());
    for (std::size_t p = 0; p < n; ++p) {
      if (taken[p]) continue;
      scores[p] = bald_scores[p];
      if (k >= 2) scores[p] -= mi_sum[p];
      if (k >= 3) scores[p] += triple_sum[p];
    }
    std::size_t best = argmax_slot(scores, taken, pool);
    taken[best] = true;
    cumulative += scores[best];
    result.indices.push_back(pool[best]);
    result.step_scores.push_back(scores[best]);
    result.cumulative_scores.push_back(cumulative);

    // refresh caches with the new pick's MI column (skipped after the
    // final pick: no further candidate scoring needs it)
    if (step + 1 < b) {
      std::vector<double> col(n);
      parallel_for(n, threads, [&](std::size_t p) {
        col[p] = pairwise_mi(t, pool[best], pool[p], true);
      });
      result.mi_pair_evals += n;
      if (k >= 3) {
        for (std::size_t slot : acquired_slots) {
          parallel_for(n, threads, [&](std::size_t p) {
            if (taken[p]) return;
            triple_sum[p] += interaction_info(
                t, {pool[p], pool[slot], pool[best]}, kDefaultEnumerationCap,
                true);
          });
        }
      }
      for (std::size_t p = 0; p < n; ++p) mi_sum[p] += col[p];
    }
    acquired_slots.push_back(best);
  }
  result.mi_pass_seconds = seconds_since(mi_t0);
  result.total_seconds = seconds_since(t0);
  result.stop_reason = StopReason::BudgetExhausted;
  return result;
}

AcquisitionResult greedy_kbald_dynamic(const LogProbTensor& t,
                                       const std::vector<std::size_t>& pool,
                                       const DynamicStopConfig& cfg,
                                       unsigned threads) {
  if (cfg.tau_abs && *cfg.tau_abs <= 0.0)
    throw ValidationError("greedy_kbald_dynamic: tau must be > 0");
  if (!cfg.tau_abs && cfg.tau_rel <= 0.0)
    throw ValidationError("greedy_kbald_dynamic: relative tau must be > 0");
  detail::check_subset(t, pool, true);
  const std::size_t max_b = std::min(cfg.max_batch, pool.size());

  auto t0 = Clock::now();
  AcquisitionResult result;
  result.method = "kbald-dynamic";

  const std::size_t n = pool.size();
  std::vector<double> bald_scores(n);
  parallel_for(n, threads,
               [&](std::size_t p) { bald_scores[p] = bald(t, pool[p]); });
  result.bald_pass_seconds = seconds_since(t0);

  std::vector<double> mi_sum(n, 0.0);
  std::vector<bool> taken(n, false);
  std::vector<std::size_t> acquired_slots;
  double cumulative2 = 0.0;
  double triple_mass = 0.0;  // sum of I3 over all triples in the prefix
  result.stop_reason = StopReason::BudgetExhausted;
  auto mi_t0 = Clock::now();

  for (std::size_t step = 0; step < max_b; ++step) {
    std::vector<double> scores(n, -std::numeric_limits<double>::infinity());
    for (std::size_t p = 0; p < n; ++p)
      if (!taken[p]) scores[p] = bald_scores[p] - mi_sum[p];
    std::size_t best = argmax_slot(scores, taken, pool);

    // 3-BALD cumulative of the extended prefix: 2-BALD plus the triple
    // terms the new point forms with acquired pairs
    double new_triples = 0.0;
    for (std::size_t a = 0; a < acquired_slots.size(); ++a)
      for (std::size_t a2 = a + 1; a2 < acquired_slots.size(); ++a2)
        new_triples += interaction_info(
            t,
            {pool[best], pool[acquired_slots[a]], pool[acquired_slots[a2]]},
            kDefaultEnumerationCap, true);

    double score2 = cumulative2 + scores[best];
    double score3 = score2 + triple_mass + new_triples;
    double tau = cfg.tau_abs ? *cfg.tau_abs : cfg.tau_rel * std::abs(score2);
    result.score2_trace.push_back(score2);
    result.score3_trace.push_back(score3);
    if (std::abs(score2 - score3) > tau) {
      result.stop_reason = StopReason::DynamicDivergence;
      break;  // the violating step is not acquired
    }

    taken[best] = true;
    cumulative2 = score2;
    triple_mass += new_triples;
    result.indices.push_back(pool[best]);
    result.step_scores.push_back(scores[best]);
    result.cumulative_scores.push_back(cumulative2);

    if (step + 1 < max_b) {
      std::vector<double> col(n);
      parallel_for(n, threads, [&](std::size_t p) {
        col[p] = pairwise_mi(t, pool[best], pool[p], true);
      });
      result.mi_pair_evals += n;
      for (std::size_t p = 0; p < n; ++p) mi_sum[p] += col[p];
    }
    acquired_slots.push_back(best);
  }
  result.mi_pass_seconds = seconds_since(mi_t0);
  result.total_seconds = seconds_since(t0);
  return result;
}

AcquisitionResult conservative_acquire(const LogProbTensor& t,
                                       const std::vector<std::size_t>& pool,
                                       std::size_t b,
                                       const ConservativeConfig& cfg) {
  if (!cfg.theta && !cfg.budget)
    throw ValidationError("conservative_acquire: need theta or budget");
  if (cfg.theta && *cfg.theta <= 0.0)
    throw ValidationError("conservative_acquire: theta must be > 0");
  if (cfg.budget && *cfg.budget <= 0.0)
    throw ValidationError("conservative_acquire: budget must be > 0");
  if (b > pool.size())
    throw ValidationError("conservative_acquire: b exceeds pool size");
  detail::check_subset(t, pool, true);

  auto t0 = Clock::now();
  AcquisitionResult result;
  result.method = "conservative";

  const std::size_t n = pool.size();
  std::vector<double> bald_scores(n);
  for (std::size_t p = 0; p < n; ++p) bald_scores[p] = bald(t, pool[p]);
  result.bald_pass_seconds = seconds_since(t0);

  std::vector<bool> excluded(n, false);
  std::vector<std::size_t> pick_slots;
  double max_pick_mi = 0.0;
  double cumulative = 0.0;
  result.stop_reason = StopReason::BudgetExhausted;
  auto mi_t0 = Clock::now();

  while (result.indices.size() < b) {
    std::size_t best = argmax_slot(bald_scores, excluded, pool);
    if (best == n) {
      result.stop_reason = StopReason::ConservativePoolEmpty;
      break;
    }
    if (cfg.budget) {
      // budget mode: stop once the running max pairwise MI among picks
      // would exceed the budget
      double worst = 0.0;
      for (std::size_t slot : pick_slots) {
        worst = std::max(worst,
                         pairwise_mi(t, pool[best], pool[slot], true));
        ++result.mi_pair_evals;
      }
      if (std::max(max_pick_mi, worst) > *cfg.budget) {
        result.stop_reason = StopReason::BudgetExhausted;
        break;
      }
      max_pick_mi = std::max(max_pick_mi, worst);
    }
    excluded[best] = true;
    pick_slots.push_back(best);
    cumulative += bald_scores[best];
    result.indices.push_back(pool[best]);
    result.step_scores.push_back(bald_scores[best]);
    result.cumulative_scores.push_back(cumulative);

    if (cfg.theta) {
      for (std::size_t p = 0; p < n; ++p) {
        if (excluded[p]) continue;
        double mi = pairwise_mi(t, pool[best], pool[p], true);
        ++result.mi_pair_evals;
        if (mi > *cfg.theta) excluded[p] = true;
      }
    }
  }
  result.mi_pass_seconds = seconds_since(mi_t0);
  result.total_seconds = seconds_since(t0);
  return result;
}

}  // namespace kbald
