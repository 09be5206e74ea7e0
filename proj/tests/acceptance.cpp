// Acceptance suite: runs every acceptance criterion at its pinned
// tolerance and prints one PASS/FAIL line per criterion. Exits nonzero
// if any criterion fails. argv[1] is the path to the CLI binary (used by
// the end-to-end determinism checks).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "kbald/bald_scores.hpp"
#include "kbald/batchbald.hpp"
#include "kbald/config.hpp"
#include "kbald/ensemble.hpp"
#include "kbald/harness.hpp"
#include "kbald/kbald_acquire.hpp"
#include "kbald/lpt_io.hpp"
#include "kbald/oracle.hpp"

#include "fixtures.hpp"

using namespace kbald;
using kbald::testing::random_tensor;

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok,
            const std::string& detail = "") {
  std::printf("%s  criterion %2d  %s%s%s\n", ok ? "PASS" : "FAIL", criterion,
              name.c_str(), detail.empty() ? "" : "  -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::size_t> iota_vec(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

int run_cmd(const std::string& cmd) { return std::system(cmd.c_str()); }

// shared synthetic task family for the simulation criteria
ExperimentConfig simulation_base(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.classes = 4;
  cfg.dims = 2;
  cfg.spread = 2.0;
  cfg.duplicate_fraction = 0.5;
  cfg.pool_per_class = 35;
  cfg.train_per_class = 2;
  cfg.test_per_class = 25;
  cfg.members = 10;
  cfg.hidden = 16;
  cfg.epochs = 150;
  cfg.lr = 0.5;
  cfg.seed = seed;
  cfg.data_seed = 20 + seed;
  cfg.train_seed = 1;
  cfg.threads = 4;
  return cfg;
}

// ---- criteria ----

void criterion_1() {
  auto t0 = Clock::now();
  bool ok = true;
  int inst = 0;
  for (std::size_t B : {2, 3, 4}) {
    std::size_t n_inst = B == 4 ? 66 : 67;  // 200 total
    for (std::size_t r = 0; r < n_inst; ++r, ++inst) {
      std::size_t C = inst % 2 == 0 ? 2 : 3;
      auto t = random_tensor(B, 8, C, 10000 + inst);
      auto report_ = oracle::inclusion_exclusion_series(t, iota_vec(B));
      if (report_.residuals.back() > 1e-9) ok = false;
    }
  }
  double secs = elapsed(t0);
  ok = ok && secs < 10.0;
  report(1, "inclusion-exclusion exact at order B (200 instances)", ok,
         "runtime " + std::to_string(secs) + " s");
}

void criterion_2(const std::string& cli) {
  bool ok = true;
  for (int inst = 0; inst < 200; ++inst) {
    std::size_t B = 2 + inst % 2;  // 2 or 3
    std::size_t C = inst % 3 == 0 ? 2 : 3;
    auto t = random_tensor(B, 8, C, 20000 + inst);
    auto subset = iota_vec(B);
    double a = kbald_score(t, subset, static_cast<int>(B));
    double b = batchbald_score(t, subset);
    if (std::abs(a - b) > 1e-9) ok = false;
  }
  // end-to-end: identical batch selections every round at b = k = 3
  for (std::uint64_t seed = 0; seed < 2 && ok; ++seed) {
    ExperimentConfig cfg = simulation_base(seed);
    cfg.batch_size = 3;
    cfg.rounds = 4;
    cfg.method = "kbald-3";
    auto a = run_simulation(cfg);
    cfg.method = "batchbald-exact";
    auto b = run_simulation(cfg);
    for (std::size_t r = 0; r < a.rows.size(); ++r)
      if (a.rows[r].acquired != b.rows[r].acquired) ok = false;
  }
  (void)cli;
  report(2, "full-order k-BALD equals BatchBALD (scores + selections)", ok);
}

void criterion_3() {
  bool ok = true;
  for (int inst = 0; inst < 100; ++inst) {
    auto t = random_tensor(12, 8, 3, 30000 + inst);
    auto pool = iota_vec(12);
    auto r = greedy_kbald(t, pool, 5, 1);
    auto sorted = pool;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [&](std::size_t a, std::size_t b) {
                       double ba = bald(t, a), bb = bald(t, b);
                       if (ba != bb) return ba > bb;
                       return a < b;
                     });
    sorted.resize(5);
    if (r.indices != sorted) ok = false;
  }
  report(3, "1-BALD selection equals top-K BALD (100 instances)", ok);
}

void criterion_4() {
  bool ok = true;
  for (int inst = 0; inst < 100; ++inst) {
    std::size_t B = 2 + inst % 3;
    auto t = random_tensor(B, 8, inst % 2 == 0 ? 2 : 3, 40000 + inst);
    auto subset = iota_vec(B);
    double tc = total_correlation(t, subset);
    double lhs = batchbald_score(t, subset);
    double rhs = kbald_score(t, subset, 1) - tc;
    if (std::abs(lhs - rhs) > 1e-9 || tc < -1e-9) ok = false;
  }
  report(4, "identity batchbald = sum bald - TC, TC >= 0 (100 instances)",
         ok);
}

void criterion_5() {
  auto t0 = Clock::now();
  bool ok = true;
  const double bound = 1.0 - std::exp(-1.0);
  for (int inst = 0; inst < 50; ++inst) {
    auto t = random_tensor(8, 8, 3, 50000 + inst);
    auto pool = iota_vec(8);
    auto greedy = greedy_batchbald(t, pool, 3);
    auto opt = oracle::exhaustive_optimal_batch(t, pool, 3);
    if (greedy.cumulative_scores.back() < bound * opt.score - 1e-9) ok = false;
  }
  double secs = elapsed(t0);
  ok = ok && secs < 60.0;
  report(5, "greedy (1 - 1/e) guarantee (50 instances)", ok,
         "runtime " + std::to_string(secs) + " s");
}

void criterion_6() {
  // duplicate-heavy pool from the generator, b = 10; tiny training split
  // and heavy class overlap give a confident but disagreeing ensemble, so
  // repeated picks of duplicated points accumulate pairwise MI fast
  BlobParams bp;
  bp.seed = 65;
  bp.classes = 4;
  bp.pool_per_class = 3;
  bp.train_per_class = 1;
  bp.test_per_class = 5;
  bp.spread = 4.0;
  bp.duplicate_fraction = 0.75;
  auto data = generate_blobs(bp);
  TrainParams tp;
  tp.members = 10;
  tp.epochs = 800;
  tp.lr = 1.0;
  tp.seed = 7;
  auto model = train_ensemble(data, tp, {}, 4);
  auto t = predict_logprobs(model, data, data.pool_idx);
  auto r = greedy_kbald(t, iota_vec(t.n_points), 10, 2);
  bool has_negative = false;
  for (double s : r.step_scores) has_negative |= s < 0.0;
  bool ok = has_negative && r.step_scores.back() < r.step_scores.front();
  std::ostringstream detail;
  detail << "first step " << r.step_scores.front() << ", last step "
         << r.step_scores.back();
  report(6, "2-BALD incremental scores go negative on duplicate-heavy pool",
         ok, detail.str());
}

void criteria_7_and_8() {
  const int n_seeds = 5;
  std::vector<double> acc_b5(n_seeds), acc_b40(n_seeds), acc_bb(n_seeds);
  for (int seed = 0; seed < n_seeds; ++seed) {
    ExperimentConfig cfg = simulation_base(seed);
    cfg.method = "kbald-2";
    cfg.batch_size = 5;
    cfg.rounds = 20;
    acc_b5[seed] = run_simulation(cfg).rows.back().accuracy;

    cfg.batch_size = 40;
    cfg.rounds = 20;
    cfg.label_budget = 100;  // same labeling budget as b=5 x 20 rounds
    acc_b40[seed] = run_simulation(cfg).rows.back().accuracy;

    cfg = simulation_base(seed);
    cfg.method = "batchbald-exact";
    cfg.batch_size = 5;
    cfg.rounds = 20;
    acc_bb[seed] = run_simulation(cfg).rows.back().accuracy;
  }
  auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  };
  double m5 = mean(acc_b5), m40 = mean(acc_b40), mbb = mean(acc_bb);
  {
    std::ostringstream detail;
    detail << "mean acc b=5: " << m5 << ", b=40: " << m40;
    report(7, "2-BALD at b=5 not worse than b=40 at equal budget",
           m5 >= m40 - 0.02, detail.str());
  }
  {
    std::ostringstream detail;
    detail << "mean acc kbald-2: " << m5 << ", batchbald-exact: " << mbb;
    report(8, "kbald-2 within 2 points of batchbald-exact (b=5, 20 rounds)",
           std::abs(m5 - mbb) <= 0.02, detail.str());
  }
}

void criterion_9() {
  auto t = random_tensor(500, 50, 10, 90001);
  ExperimentConfig cfg;
  cfg.threads = 4;
  cfg.mc_samples = 8192;
  cfg.mc_seed = 1;

  auto time_method = [&](const std::string& method, std::size_t b,
                         std::size_t* evals) {
    cfg.method = method;
    auto t0 = Clock::now();
    auto r = run_acquisition(t, cfg, b);
    if (evals) *evals = r.mi_pair_evals;
    return elapsed(t0);
  };

  std::size_t evals5 = 0, evals10 = 0;
  double k2_5 = time_method("kbald-2", 5, &evals5);
  double k2_10 = time_method("kbald-2", 10, &evals10);
  double mc_5 = time_method("batchbald-mc", 5, nullptr);
  double mc_10 = time_method("batchbald-mc", 10, nullptr);

  double ratio5 = mc_5 / k2_5, ratio10 = mc_10 / k2_10;
  bool ok = ratio10 > ratio5 && evals5 == 500 * 4 && evals10 == 500 * 9;
  std::ostringstream detail;
  detail << "ratio b=5: " << ratio5 << ", b=10: " << ratio10 << ", evals "
         << evals5 << "/" << evals10;
  report(9, "BatchBALD/2-BALD time ratio grows with b; MI evals = N(b-1)",
         ok, detail.str());
}

void criterion_10() {
  bool ok = true;
  std::ostringstream detail;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    BlobParams bp;
    bp.seed = 300 + seed;
    bp.classes = 4;
    bp.pool_per_class = 4;
    bp.train_per_class = 1;
    bp.test_per_class = 5;
    TrainParams tp;
    tp.members = 10;
    tp.epochs = 800;
    tp.lr = 1.0;
    tp.seed = 11 + seed;

    // same pool size and same tau; the duplicate-heavy pool overlaps
    // heavily and repeats points, the independent one is well separated
    auto batch_size_for = [&](double dup_fraction, double spread) {
      bp.duplicate_fraction = dup_fraction;
      bp.spread = spread;
      auto data = generate_blobs(bp);
      auto model = train_ensemble(data, tp, {}, 4);
      auto t = predict_logprobs(model, data, data.pool_idx);
      DynamicStopConfig dc;
      dc.tau_abs = 0.01;
      dc.max_batch = 12;
      return greedy_kbald_dynamic(t, iota_vec(t.n_points), dc).indices.size();
    };
    std::size_t dup_batch = batch_size_for(0.6, 4.0);
    std::size_t ind_batch = batch_size_for(0.0, 0.5);
    detail << dup_batch << "<" << ind_batch << " ";
    if (dup_batch >= ind_batch) ok = false;
  }
  // tau = +large reproduces plain greedy 2-BALD
  {
    auto t = random_tensor(20, 8, 4, 777);
    DynamicStopConfig dc;
    dc.tau_abs = 1e12;
    dc.max_batch = 8;
    auto dyn = greedy_kbald_dynamic(t, iota_vec(20), dc);
    auto plain = greedy_kbald(t, iota_vec(20), 8, 2);
    if (dyn.indices != plain.indices) ok = false;
  }
  report(10, "dynamic stopping: earlier stop on duplicate-heavy pools", ok,
         detail.str());
}

void criterion_11() {
  double prev = 1e300;
  bool ok = true;
  double err_1e5 = 0.0;
  for (std::size_t m : {100, 1000, 10000, 100000}) {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto t = random_tensor(2, 8, 3, 110000 + seed);
      double exact = entropy(joint_predictive(t, {0, 1}));
      total += std::abs(mc_joint_entropy(t, {0, 1}, m, seed) - exact);
    }
    double mean_err = total / 20.0;
    if (m <= 10000 && mean_err > prev) ok = false;
    prev = mean_err;
    if (m == 100000) err_1e5 = mean_err;
  }
  ok = ok && err_1e5 <= 0.01;
  std::ostringstream detail;
  detail << "mean |err| at m=1e5: " << err_1e5;
  report(11, "MC joint-entropy error decreases in m and <= 0.01 at m=1e5",
         ok, detail.str());
}

void criterion_12(const std::string& cli) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "kbald_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::string d = dir.string();
  bool ok = true;

  std::string base_cfg =
      "classes = 3\n"
      "pool_per_class = 12\n"
      "train_per_class = 4\n"
      "test_per_class = 8\n"
      "spread = 2.0\n"
      "members = 6\n"
      "epochs = 80\n"
      "record_timings = false\n";
  write_file(d + "/gen.cfg", base_cfg);

  // make-tensor twice, byte-identical
  ok &= run_cmd(cli + " make-tensor --config " + d + "/gen.cfg --output " + d +
                "/a.lpt > /dev/null") == 0;
  ok &= run_cmd(cli + " make-tensor --config " + d + "/gen.cfg --output " + d +
                "/b.lpt > /dev/null") == 0;
  ok &= read_file(d + "/a.lpt") == read_file(d + "/b.lpt");
  ok &= !read_file(d + "/a.lpt").empty();

  // score twice
  ok &= run_cmd(cli + " score --tensor " + d + "/a.lpt --output " + d +
                "/s1.csv") == 0;
  ok &= run_cmd(cli + " score --tensor " + d + "/a.lpt --output " + d +
                "/s2.csv") == 0;
  ok &= read_file(d + "/s1.csv") == read_file(d + "/s2.csv");

  // acquire twice, and across thread counts
  for (std::string method : {"kbald-2", "batchbald-mc", "kbald-dynamic"}) {
    std::string common = cli + " acquire --tensor " + d +
                         "/a.lpt --method " + method +
                         " --batch-size 4 --mc-samples 512 --no-timings ";
    ok &= run_cmd(common + "--threads 1 --output " + d + "/a1.json") == 0;
    ok &= run_cmd(common + "--threads 4 --output " + d + "/a2.json") == 0;
    ok &= read_file(d + "/a1.json") == read_file(d + "/a2.json");
    if (!ok) break;
  }

  // simulate twice with different thread counts
  for (int run = 0; run < 2; ++run) {
    std::string cfg = base_cfg +
                      "method = kbald-2\nbatch_size = 3\nrounds = 2\n"
                      "threads = " + std::string(run == 0 ? "1" : "4") +
                      "\noutput_dir = " + d + "/sim" + std::to_string(run) +
                      "\n";
    write_file(d + "/sim.cfg", cfg);
    ok &= run_cmd(cli + " simulate --config " + d + "/sim.cfg > /dev/null") ==
          0;
  }
  ok &= read_file(d + "/sim0/curve.csv") == read_file(d + "/sim1/curve.csv");
  ok &= read_file(d + "/sim0/run.json") == read_file(d + "/sim1/run.json");

  // bench twice (timings zeroed)
  for (int run = 0; run < 2; ++run) {
    std::string cfg = base_cfg +
                      "bench_methods = kbald-1, kbald-2\n"
                      "bench_batch_sizes = 2,3\nbench_reps = 1\n"
                      "threads = " + std::string(run == 0 ? "1" : "2") +
                      "\noutput_dir = " + d + "/bench" + std::to_string(run) +
                      "\n";
    write_file(d + "/bench.cfg", cfg);
    ok &= run_cmd(cli + " bench --config " + d + "/bench.cfg > /dev/null") ==
          0;
  }
  ok &= read_file(d + "/bench0/bench.csv") == read_file(d + "/bench1/bench.csv");

  // verify subcommand exits 0 on defaults, nonzero on a corrupted tensor
  ok &= run_cmd(cli + " verify --points 3 --instances 3 > /dev/null") == 0;
  std::string bad = read_file(d + "/a.lpt");
  bad.resize(bad.size() - 8);
  write_file(d + "/bad.lpt", bad);
  ok &= run_cmd(cli + " verify --tensor " + d + "/bad.lpt > /dev/null 2>&1") !=
        0;

  report(12, "CLI outputs byte-identical across reruns and thread counts",
         ok);
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "./kbald_cli";
  auto t0 = Clock::now();
  criterion_1();
  criterion_2(cli);
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criteria_7_and_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12(cli);
  std::printf("acceptance: %d failure(s), total %.1f s\n", g_failures,
              elapsed(t0));
  return g_failures == 0 ? 0 : 1;
}
