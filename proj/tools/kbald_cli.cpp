#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "kbald/bald_scores.hpp"
#include "kbald/batchbald.hpp"
#include "kbald/common.hpp"
#include "kbald/config.hpp"
#include "kbald/ensemble.hpp"
#include "kbald/harness.hpp"
#include "kbald/kbald_acquire.hpp"
#include "kbald/lpt_io.hpp"
#include "kbald/oracle.hpp"
#include "kbald/rng.hpp"

namespace {

using namespace kbald;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file " + path);
  out << text;
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::vector<std::size_t> parse_index_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoull(item));
  }
  return out;
}

// random normalized log-prob tensor for `verify`
LogProbTensor random_tensor(std::size_t n, std::size_t s, std::size_t c,
                            std::uint64_t seed) {
  LogProbTensor t;
  t.n_points = n;
  t.n_samples = s;
  t.n_classes = c;
  t.data.resize(n * s * c);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t sp = 0; sp < s; ++sp) {
      std::vector<double> logits(c);
      for (auto& v : logits) v = 2.0 * rng.next_normal();
      double mx = *std::max_element(logits.begin(), logits.end());
      double acc = 0.0;
      for (double v : logits) acc += std::exp(v - mx);
      double lse = mx + std::log(acc);
      for (std::size_t cc = 0; cc < c; ++cc)
        t.at(i, sp, cc) = logits[cc] - lse;
    }
  return t;
}

LogProbTensor tensor_from_config(const ExperimentConfig& cfg) {
  if (cfg.lpt_path) return read_lpt(*cfg.lpt_path);
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
  tp.seed = cfg.train_seed;
  EnsembleModel model = train_ensemble(data, tp, {}, cfg.threads);
  return predict_logprobs(model, data, data.pool_idx);
}

int run_score(const std::string& tensor_path, const std::string& method,
              const std::string& mi_subset, const std::string& output) {
  if (method != "bald")
    throw ValidationError("score: method must be bald");
  LogProbTensor t = read_lpt(tensor_path);
  std::ostringstream out;
  out << "index,score_nats\n";
  for (std::size_t i = 0; i < t.n_points; ++i)
    out << i << ',' << fmt(bald(t, i)) << '\n';
  write_text(output, out.str());
  if (!mi_subset.empty()) {
    auto subset = parse_index_list(mi_subset);
    std::ostringstream mi;
    mi << "i,j,mi_nats\n";
    for (std::size_t a = 0; a < subset.size(); ++a)
      for (std::size_t b = a + 1; b < subset.size(); ++b)
        mi << subset[a] << ',' << subset[b] << ','
           << fmt(pairwise_mi(t, subset[a], subset[b])) << '\n';
    write_text(output + ".mi.csv", mi.str());
  }
  return 0;
}

int run_acquire(const std::string& tensor_path, ExperimentConfig cfg,
                std::size_t b, const std::string& output) {
  LogProbTensor t = read_lpt(tensor_path);
  AcquisitionResult r;
  try {
    r = run_acquisition(t, cfg, b);
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(std::string(e.what()) +
                          " (try method=batchbald-mc or a kbald method)");
  }
  write_text(output, acquisition_json(r, cfg.record_timings));
  return 0;
}

int run_simulate(const std::string& config_path) {
  ExperimentConfig cfg = parse_config_file(config_path);
  SimulationResult r = run_simulation(cfg);
  std::filesystem::create_directories(cfg.output_dir);
  write_text(cfg.output_dir + "/curve.csv",
             simulation_csv(r, cfg.record_timings));
  write_text(cfg.output_dir + "/run.json",
             simulation_json(r, cfg.record_timings));
  std::cout << "wrote " << cfg.output_dir << "/curve.csv and run.json\n";
  return 0;
}

int run_bench_cmd(const std::string& config_path) {
  ExperimentConfig cfg = parse_config_file(config_path);
  LogProbTensor t = tensor_from_config(cfg);
  auto rows = run_bench(t, cfg);
  std::filesystem::create_directories(cfg.output_dir);
  std::string csv = bench_csv(rows, cfg.record_timings);
  write_text(cfg.output_dir + "/bench.csv", csv);
  std::cout << csv;
  return 0;
}

int run_verify(std::size_t b, std::size_t s, std::size_t c,
               std::uint64_t seed, std::size_t instances,
               const std::string& tensor_path) {
  bool ok = true;
  if (!tensor_path.empty()) {
    LogProbTensor t = read_lpt(tensor_path);  // throws on corruption
    std::cout << "tensor ok: N=" << t.n_points << " S=" << t.n_samples
              << " C=" << t.n_classes << "\n";
  }
  std::printf("instance  order  partial_sum     residual\n");
  for (std::size_t inst = 0; inst < instances; ++inst) {
    LogProbTensor t = random_tensor(b, s, c, seed + inst);
    std::vector<std::size_t> subset(b);
    std::iota(subset.begin(), subset.end(), 0);
    auto report = oracle::inclusion_exclusion_series(t, subset);
    for (std::size_t order = 1; order <= b; ++order) {
      std::printf("%8zu  %5zu  %12.9f  %12.3e\n", inst, order,
                  report.partial_sums[order - 1], report.residuals[order - 1]);
    }
    if (report.residuals.back() > 1e-9) {
      std::printf("instance %zu: order-%zu residual %.3e exceeds 1e-9\n",
                  inst, b, report.residuals.back());
      ok = false;
    }
  }
  std::cout << (ok ? "verify: all residuals within tolerance\n"
                   : "verify: FAILED\n");
  return ok ? 0 : 1;
}

int run_make_tensor(const std::string& config_path, const std::string& output) {
  ExperimentConfig cfg = parse_config_file(config_path);
  write_lpt(output, tensor_from_config(cfg));
  std::cout << "wrote " << output << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-BALD batch active-learning acquisition engine"};
  app.require_subcommand(1);

  std::string tensor_path, output, method = "bald", mi_subset, config_path;
  std::size_t batch_size = 5;

  auto* score = app.add_subcommand("score", "per-point BALD scores as CSV");
  score->add_option("--tensor", tensor_path, "LPT tensor file")->required();
  score->add_option("--method", method, "scoring method (bald)");
  score->add_option("--mi-subset", mi_subset,
                    "comma-separated indices; also emit their pairwise-MI "
                    "matrix");
  score->add_option("--output", output, "output CSV path")->required();

  auto* acquire =
      app.add_subcommand("acquire", "select an acquisition batch, emit JSON");
  ExperimentConfig acq_cfg;
  acquire->add_option("--tensor", tensor_path, "LPT tensor file")->required();
  acquire->add_option("--method", acq_cfg.method,
                      "bald-topk | batchbald-exact | batchbald-mc | kbald-1/2/3 "
                      "| kbald-dynamic | conservative | random");
  acquire->add_option("--batch-size", batch_size, "acquisition batch size");
  acquire->add_option("--mc-samples", acq_cfg.mc_samples, "MC draws");
  acquire->add_option("--mc-seed", acq_cfg.mc_seed, "MC seed");
  acquire->add_option("--seed", acq_cfg.seed, "seed (random method)");
  double tau_abs = 0.0, theta = 0.0, budget = 0.0;
  acquire->add_option("--tau-abs", tau_abs, "absolute divergence threshold");
  acquire->add_option("--tau-rel", acq_cfg.tau_rel,
                      "relative divergence threshold");
  acquire->add_option("--theta", theta, "conservative MI exclusion threshold");
  acquire->add_option("--budget", budget, "conservative max-MI budget");
  acquire->add_option("--threads", acq_cfg.threads, "worker threads");
  bool no_timings = false;
  acquire->add_flag("--no-timings", no_timings,
                    "zero the wall-time fields (byte-stable output)");
  acquire->add_option("--output", output, "output JSON path")->required();

  auto* simulate =
      app.add_subcommand("simulate", "active-learning loop from a config file");
  simulate->add_option("--config", config_path, "config file")->required();

  auto* bench = app.add_subcommand("bench", "acquisition timing grid");
  bench->add_option("--config", config_path, "config file")->required();

  auto* verify = app.add_subcommand(
      "verify", "brute-force identity checks on random instances");
  std::size_t vb = 3, vs = 8, vc = 2, vinstances = 5;
  std::uint64_t vseed = 0;
  verify->add_option("--points", vb, "subset size B (<= 5)");
  verify->add_option("--samples", vs, "posterior samples S");
  verify->add_option("--classes", vc, "classes C");
  verify->add_option("--seed", vseed, "base seed");
  verify->add_option("--instances", vinstances, "random instances");
  verify->add_option("--tensor", tensor_path,
                     "optional LPT file to validate first");

  auto* make_tensor = app.add_subcommand(
      "make-tensor", "train an ensemble from a config and write the pool "
                     "predictions as an LPT file");
  make_tensor->add_option("--config", config_path, "config file")->required();
  make_tensor->add_option("--output", output, "output LPT path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (score->parsed())
      return run_score(tensor_path, method, mi_subset, output);
    if (acquire->parsed()) {
      if (acquire->count("--tau-abs")) acq_cfg.tau_abs = tau_abs;
      if (acquire->count("--theta")) acq_cfg.theta = theta;
      if (acquire->count("--budget")) acq_cfg.budget = budget;
      if (no_timings) acq_cfg.record_timings = false;
      if (!is_known_method(acq_cfg.method))
        throw ValidationError("acquire: unknown method " + acq_cfg.method);
      return run_acquire(tensor_path, acq_cfg, batch_size, output);
    }
    if (simulate->parsed()) return run_simulate(config_path);
    if (bench->parsed()) return run_bench_cmd(config_path);
    if (verify->parsed()) {
      std::string vt = verify->count("--tensor") ? tensor_path : "";
      return run_verify(vb, vs, vc, vseed, vinstances, vt);
    }
    if (make_tensor->parsed()) return run_make_tensor(config_path, output);
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
