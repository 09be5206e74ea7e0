#pragma once

#include <string>
#include <vector>

#include "kbald/acquisition.hpp"
#include "kbald/config.hpp"
#include "kbald/tensor.hpp"

namespace kbald {

// Dispatches one acquisition over tensor rows 0..N-1 according to
// cfg.method. seed_offset perturbs the MC / random seeds per round.
AcquisitionResult run_acquisition(const LogProbTensor& t,
                                  const ExperimentConfig& cfg, std::size_t b,
                                  std::uint64_t seed_offset = 0);

struct RoundRecord {
  std::size_t round = 0;
  std::size_t labeled = 0;       // training-set size after this round
  double accuracy = 0.0;         // test accuracy after retraining
  double acq_seconds = 0.0;      // acquisition wall time (0 before round 1)
  std::vector<std::size_t> acquired;  // dataset indices acquired this round
  std::string stop_reason;
};

// Pool-based active-learning loop: train ensemble on the labeled set,
// predict the pool, acquire a batch, move its labels, evaluate on the
// test split. Row 0 is the initial state before any acquisition.
struct SimulationResult {
  std::string method;
  std::uint64_t seed = 0;
  std::vector<RoundRecord> rows;
};

SimulationResult run_simulation(const ExperimentConfig& cfg);

// learning-curve CSV: round,labeled,accuracy,acq_seconds,method,seed
std::string simulation_csv(const SimulationResult& r, bool record_timings);
// full trace (acquired indices, stop reasons) as JSON text
std::string simulation_json(const SimulationResult& r, bool record_timings);

struct BenchRow {
  std::string method;
  std::size_t batch_size = 0;
  double median_seconds = 0.0;
  std::size_t evals = 0;  // MI-pair evaluations (k-BALD methods), else 0
};

// Times acquisition only (scoring + selection; no training) on a fixed
// tensor, median over cfg.bench_reps repetitions after one discarded
// warmup run.
std::vector<BenchRow> run_bench(const LogProbTensor& t,
                                const ExperimentConfig& cfg);

std::string bench_csv(const std::vector<BenchRow>& rows, bool record_timings);

// acquisition trace as JSON text
std::string acquisition_json(const AcquisitionResult& r, bool record_timings);

}  // namespace kbald
