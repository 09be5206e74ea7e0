#include "kbald/harness.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kbald/batchbald.hpp"
#include "kbald/common.hpp"
#include "kbald/ensemble.hpp"
#include "kbald/kbald_acquire.hpp"
#include "kbald/rng.hpp"

namespace kbald {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::size_t> all_rows(const LogProbTensor& t) {
  std::vector<std::size_t> pool(t.n_points);
  std::iota(pool.begin(), pool.end(), 0);
  return pool;
}

AcquisitionResult random_acquire(const LogProbTensor& t, std::size_t b,
                                 std::uint64_t seed) {
  auto pool = all_rows(t);
  if (b > pool.size())
    throw ValidationError("random: b exceeds pool size");
  Rng rng(seed);
  // Fisher-Yates prefix shuffle
  for (std::size_t i = 0; i < b; ++i) {
    std::size_t j = i + rng.next_below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  AcquisitionResult r;
  r.method = "random";
  r.indices.assign(pool.begin(), pool.begin() + b);
  r.step_scores.assign(b, 0.0);
  r.cumulative_scores.assign(b, 0.0);
  return r;
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

AcquisitionResult run_acquisition(const LogProbTensor& t,
                                  const ExperimentConfig& cfg, std::size_t b,
                                  std::uint64_t seed_offset) {
  const auto pool = all_rows(t);
  if (cfg.method == "bald-topk" || cfg.method == "kbald-1")
    return greedy_kbald(t, pool, b, 1, cfg.threads);
  if (cfg.method == "kbald-2")
    return greedy_kbald(t, pool, b, 2, cfg.threads);
  if (cfg.method == "kbald-3")
    return greedy_kbald(t, pool, b, 3, cfg.threads);
  if (cfg.method == "batchbald-exact")
    return greedy_batchbald(t, pool, b, ScoreMode::exact(), nullptr,
                            cfg.threads);
  if (cfg.method == "batchbald-mc")
    return greedy_batchbald(t, pool, b,
                            ScoreMode::mc(cfg.mc_samples,
                                          cfg.mc_seed + seed_offset),
                            nullptr, cfg.threads);
  if (cfg.method == "kbald-dynamic") {
    DynamicStopConfig dc;
    dc.tau_abs = cfg.tau_abs;
    dc.tau_rel = cfg.tau_rel;
    dc.max_batch = b;
    return greedy_kbald_dynamic(t, pool, dc, cfg.threads);
  }
  if (cfg.method == "conservative") {
    ConservativeConfig cc;
    cc.theta = cfg.theta;
    cc.budget = cfg.budget;
    return conservative_acquire(t, pool, b, cc);
  }
  if (cfg.method == "random")
    return random_acquire(t, b, cfg.seed + seed_offset);
  throw ValidationError("run_acquisition: unknown method " + cfg.method);
}

SimulationResult run_simulation(const ExperimentConfig& cfg) {
  if (cfg.lpt_path)
    throw ValidationError(
        "simulate: needs a dataset spec (the loop retrains each round); "
        "lpt_path only applies to score/acquire/bench");

  BlobParams bp;
  bp.seed = cfg.data_seed;
  bp.classes = cfg.classes;
  bp.pool_per_class = cfg.pool_per_class;
  bp.train_per_class = cfg.train_per_class;
  bp.test_per_class = cfg.test_per_class;
  bp.dims = cfg.dims;
  bp.spread = cfg.spread;
  bp.duplicate_fraction = cfg.duplicate_fraction;
  SyntheticDataset data = generate_blobs(bp);

  TrainParams tp;
  tp.members = cfg.members;
  tp.hidden = cfg.hidden;
  tp.epochs = cfg.epochs;
  tp.lr = cfg.lr;

  SimulationResult result;
  result.method = cfg.method;
  result.seed = cfg.seed;

  std::vector<std::size_t> labeled = data.train_idx;
  std::vector<std::size_t> pool = data.pool_idx;
  std::size_t acquired_total = 0;

  tp.seed = cfg.train_seed + cfg.seed * 1000003ULL;
  EnsembleModel model = train_ensemble(data, tp, labeled, cfg.threads);
  result.rows.push_back({0, labeled.size(),
                         ensemble_accuracy(model, data, data.test_idx), 0.0,
                         {}, ""});

  for (std::size_t round = 1; round <= cfg.rounds; ++round) {
    std::size_t b = std::min(cfg.batch_size, pool.size());
    if (cfg.label_budget)
      b = std::min(b, *cfg.label_budget - std::min(*cfg.label_budget,
                                                   acquired_total));
    if (b == 0) break;

    LogProbTensor t = predict_logprobs(model, data, pool);
    auto acq_t0 = Clock::now();
    AcquisitionResult acq = run_acquisition(t, cfg, b, round);
    double acq_seconds =
        std::chrono::duration<double>(Clock::now() - acq_t0).count();

    // tensor rows -> dataset indices; move them from pool to labeled
    std::vector<std::size_t> picked;
    for (std::size_t row : acq.indices) picked.push_back(pool[row]);
    std::vector<bool> drop(pool.size(), false);
    for (std::size_t row : acq.indices) drop[row] = true;
    std::vector<std::size_t> next_pool;
    for (std::size_t p = 0; p < pool.size(); ++p)
      if (!drop[p]) next_pool.push_back(pool[p]);
    pool = std::move(next_pool);
    labeled.insert(labeled.end(), picked.begin(), picked.end());
    acquired_total += picked.size();

    tp.seed = cfg.train_seed + cfg.seed * 1000003ULL + round;
    model = train_ensemble(data, tp, labeled, cfg.threads);
    result.rows.push_back({round, labeled.size(),
                           ensemble_accuracy(model, data, data.test_idx),
                           acq_seconds, picked, to_string(acq.stop_reason)});
  }
  return result;
}

std::string simulation_csv(const SimulationResult& r, bool record_timings) {
  std::ostringstream out;
  out << "round,labeled,accuracy,acq_seconds,method,seed\n";
  for (const auto& row : r.rows) {
    out << row.round << ',' << row.labeled << ',' << fmt(row.accuracy) << ','
        << fmt(record_timings ? row.acq_seconds : 0.0) << ',' << r.method
        << ',' << r.seed << '\n';
  }
  return out.str();
}

std::string simulation_json(const SimulationResult& r, bool record_timings) {
  nlohmann::ordered_json j;
  j["method"] = r.method;
  j["seed"] = r.seed;
  j["rounds"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json rj;
    rj["round"] = row.round;
    rj["labeled"] = row.labeled;
    rj["accuracy"] = row.accuracy;
    rj["acq_seconds"] = record_timings ? row.acq_seconds : 0.0;
    rj["acquired"] = row.acquired;
    rj["stop_reason"] = row.stop_reason;
    j["rounds"].push_back(rj);
  }
  return j.dump(2) + "\n";
}

std::string acquisition_json(const AcquisitionResult& r, bool record_timings) {
  nlohmann::ordered_json j;
  j["method"] = r.method;
  j["indices"] = r.indices;
  j["step_scores"] = r.step_scores;
  j["cumulative_scores"] = r.cumulative_scores;
  j["stop_reason"] = to_string(r.stop_reason);
  j["mi_pair_evals"] = r.mi_pair_evals;
  if (!r.score2_trace.empty()) {
    j["score2_trace"] = r.score2_trace;
    j["score3_trace"] = r.score3_trace;
  }
  j["bald_pass_seconds"] = record_timings ? r.bald_pass_seconds : 0.0;
  j["mi_pass_seconds"] = record_timings ? r.mi_pass_seconds : 0.0;
  j["total_seconds"] = record_timings ? r.total_seconds : 0.0;
  return j.dump(2) + "\n";
}

std::vector<BenchRow> run_bench(const LogProbTensor& t,
                                const ExperimentConfig& cfg) {
  if (cfg.bench_reps < 1)
    throw ValidationError("bench: bench_reps must be >= 1");
  std::vector<BenchRow> rows;
  for (const auto& method : cfg.bench_methods) {
    for (std::size_t b : cfg.bench_batch_sizes) {
      ExperimentConfig mc = cfg;
      mc.method = method;
      std::vector<double> times;
      std::size_t evals = 0;
      // warmup run discarded
      for (std::size_t rep = 0; rep <= cfg.bench_reps; ++rep) {
        auto t0 = Clock::now();
        AcquisitionResult r = run_acquisition(t, mc, b, rep);
        double dt = std::chrono::duration<double>(Clock::now() - t0).count();
        if (rep > 0) times.push_back(dt);
        evals = r.mi_pair_evals;
      }
      std::sort(times.begin(), times.end());
      double median = times.size() % 2 == 1
                          ? times[times.size() / 2]
                          : 0.5 * (times[times.size() / 2 - 1] +
                                   times[times.size() / 2]);
      rows.push_back({method, b, median, evals});
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows, bool record_timings) {
  std::ostringstream out;
  out << "method,batch_size,median_seconds,evals\n";
  for (const auto& r : rows)
    out << r.method << ',' << r.batch_size << ','
        << fmt(record_timings ? r.median_seconds : 0.0) << ',' << r.evals
        << '\n';
  return out.str();
}

}  // namespace kbald
