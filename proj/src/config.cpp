#include "kbald/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "kbald/common.hpp"

namespace kbald {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("config: bad boolean for " + key + ": " + v);
}

template <typename T>
T parse_num(const std::string& v, const std::string& key) {
  std::istringstream iss(v);
  T out;
  std::string rest;
  if (!(iss >> out) || (iss >> rest))
    throw ValidationError("config: bad number for " + key + ": " + v);
  return out;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

bool is_known_method(const std::string& method) {
  static const std::set<std::string> known = {
      "bald-topk",  "batchbald-exact", "batchbald-mc", "kbald-1",
      "kbald-2",    "kbald-3",         "kbald-dynamic", "conservative",
      "random"};
  return known.count(method) > 0;
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(lineno) +
                            ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));

    if (key == "method") {
      if (!is_known_method(val))
        throw ValidationError("config: unknown method " + val);
      cfg.method = val;
    } else if (key == "batch_size") {
      cfg.batch_size = parse_num<std::size_t>(val, key);
    } else if (key == "rounds") {
      cfg.rounds = parse_num<std::size_t>(val, key);
    } else if (key == "label_budget") {
      cfg.label_budget = parse_num<std::size_t>(val, key);
    } else if (key == "seed") {
      cfg.seed = parse_num<std::uint64_t>(val, key);
    } else if (key == "threads") {
      cfg.threads = parse_num<unsigned>(val, key);
    } else if (key == "record_timings") {
      cfg.record_timings = parse_bool(val, key);
    } else if (key == "output_dir") {
      cfg.output_dir = val;
    } else if (key == "lpt_path") {
      cfg.lpt_path = val;
    } else if (key == "data_seed") {
      cfg.data_seed = parse_num<std::uint64_t>(val, key);
    } else if (key == "classes") {
      cfg.classes = parse_num<std::size_t>(val, key);
    } else if (key == "pool_per_class") {
      cfg.pool_per_class = parse_num<std::size_t>(val, key);
    } else if (key == "train_per_class") {
      cfg.train_per_class = parse_num<std::size_t>(val, key);
    } else if (key == "test_per_class") {
      cfg.test_per_class = parse_num<std::size_t>(val, key);
    } else if (key == "dims") {
      cfg.dims = parse_num<std::size_t>(val, key);
    } else if (key == "spread") {
      cfg.spread = parse_num<double>(val, key);
    } else if (key == "duplicate_fraction") {
      cfg.duplicate_fraction = parse_num<double>(val, key);
    } else if (key == "members") {
      cfg.members = parse_num<std::size_t>(val, key);
    } else if (key == "hidden") {
      cfg.hidden = parse_num<std::size_t>(val, key);
    } else if (key == "epochs") {
      cfg.epochs = parse_num<std::size_t>(val, key);
    } else if (key == "lr") {
      cfg.lr = parse_num<double>(val, key);
    } else if (key == "train_seed") {
      cfg.train_seed = parse_num<std::uint64_t>(val, key);
    } else if (key == "mc_samples") {
      cfg.mc_samples = parse_num<std::size_t>(val, key);
    } else if (key == "mc_seed") {
      cfg.mc_seed = parse_num<std::uint64_t>(val, key);
    } else if (key == "tau_abs") {
      cfg.tau_abs = parse_num<double>(val, key);
    } else if (key == "tau_rel") {
      cfg.tau_rel = parse_num<double>(val, key);
    } else if (key == "max_batch") {
      cfg.max_batch = parse_num<std::size_t>(val, key);
    } else if (key == "theta") {
      cfg.theta = parse_num<double>(val, key);
    } else if (key == "budget") {
      cfg.budget = parse_num<double>(val, key);
    } else if (key == "bench_batch_sizes") {
      cfg.bench_batch_sizes.clear();
      for (auto& item : split_list(val))
        cfg.bench_batch_sizes.push_back(parse_num<std::size_t>(item, key));
    } else if (key == "bench_methods") {
      cfg.bench_methods = split_list(val);
      for (auto& m : cfg.bench_methods)
        if (!is_known_method(m))
          throw ValidationError("config: unknown bench method " + m);
    } else if (key == "bench_reps") {
      cfg.bench_reps = parse_num<std::size_t>(val, key);
    } else {
      throw ValidationError("config: unknown key " + key);
    }
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace kbald
