#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kbald {

// Flat key = value experiment configuration. '#' starts a comment;
// unknown keys are rejected.
struct ExperimentConfig {
  // run
  std::string method = "kbald-2";
  std::size_t batch_size = 5;
  std::size_t rounds = 10;
  std::optional<std::size_t> label_budget;  // cap on total acquired labels
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool record_timings = true;
  std::string output_dir = ".";
  std::optional<std::string> lpt_path;

  // dataset
  std::uint64_t data_seed = 0;
  std::size_t classes = 4;
  std::size_t pool_per_class = 50;
  std::size_t train_per_class = 5;
  std::size_t test_per_class = 50;
  std::size_t dims = 2;
  double spread = 1.5;
  double duplicate_fraction = 0.0;

  // ensemble
  std::size_t members = 10;
  std::size_t hidden = 16;
  std::size_t epochs = 300;
  double lr = 0.5;
  std::uint64_t train_seed = 1;

  // method parameters
  std::size_t mc_samples = 4096;
  std::uint64_t mc_seed = 0;
  std::optional<double> tau_abs;
  double tau_rel = 0.10;
  std::size_t max_batch = 10;
  std::optional<double> theta;
  std::optional<double> budget;

  // bench
  std::vector<std::size_t> bench_batch_sizes = {2, 5, 10};
  std::vector<std::string> bench_methods = {"kbald-2", "batchbald-mc"};
  std::size_t bench_reps = 5;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

bool is_known_method(const std::string& method);

}  // namespace kbald
