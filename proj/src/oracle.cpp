#include "kbald/oracle.hpp"

#include <cmath>
#include <limits>

#include "kbald/common.hpp"

namespace kbald::oracle {

namespace {

// probability of one label configuration under the averaged joint
// predictive, by direct iteration
double config_prob(const LogProbTensor& t,
                   const std::vector<std::size_t>& subset,
                   const std::vector<std::size_t>& labels) {
  double acc = 0.0;
  for (std::size_t s = 0; s < t.n_samples; ++s) {
    double prod = 1.0;
    for (std::size_t j = 0; j < subset.size(); ++j)
      prod *= std::exp(t.at(subset[j], s, labels[j]));
    acc += prod;
  }
  return acc / static_cast<double>(t.n_samples);
}

bool next_config(std::vector<std::size_t>& labels, std::size_t n_classes) {
  for (std::size_t j = labels.size(); j-- > 0;) {
    if (++labels[j] < n_classes) return true;
    labels[j] = 0;
  }
  return false;
}

double mean_cond_entropy_direct(const LogProbTensor& t, std::size_t i) {
  double acc = 0.0;
  for (std::size_t s = 0; s < t.n_samples; ++s)
    for (std::size_t c = 0; c < t.n_classes; ++c) {
      double lp = t.at(i, s, c);
      if (lp > -std::numeric_limits<double>::infinity())
        acc -= std::exp(lp) * lp;
    }
  return acc / static_cast<double>(t.n_samples);
}

double bald_direct(const LogProbTensor& t, std::size_t i) {
  return exact_joint_entropy(t, {i}) - mean_cond_entropy_direct(t, i);
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  std::size_t j = k;
  while (j > 0) {
    --j;
    if (idx[j] != n - k + j) {
      ++idx[j];
      for (std::size_t l = j + 1; l < k; ++l) idx[l] = idx[l - 1] + 1;
      return true;
    }
  }
  return false;
}

void check_cap(const LogProbTensor& t, std::size_t subset_size) {
  double configs = std::pow(static_cast<double>(t.n_classes),
                            static_cast<double>(subset_size));
  if (configs > double{1 << 20})
    throw InfeasibleError("oracle: enumeration cap exceeded");
}

}  // namespace

double exact_joint_entropy(const LogProbTensor& t,
                           const std::vector<std::size_t>& subset) {
  if (subset.empty()) throw ValidationError("oracle: empty subset");
  check_cap(t, subset.size());
  std::vector<std::size_t> labels(subset.size(), 0);
  double h = 0.0;
  do {
    double p = config_prob(t, subset, labels);
    if (p > 0.0) h -= p * std::log(p);
  } while (next_config(labels, t.n_classes));
  return h;
}

double exact_joint_mi(const LogProbTensor& t,
                      const std::vector<std::size_t>& subset) {
  double cond = 0.0;
  for (std::size_t i : subset) cond += mean_cond_entropy_direct(t, i);
  return exact_joint_entropy(t, subset) - cond;
}

IdentityReport inclusion_exclusion_series(const LogProbTensor& t,
                                          const std::vector<std::size_t>& subset) {
  const std::size_t B = subset.size();
  if (B < 1 || B > 5)
    throw ValidationError("inclusion_exclusion_series: need 1 <= B <= 5");
  IdentityReport report;
  report.exact_mi = exact_joint_mi(t, subset);

  // co-information of every sub-subset, from its own subset entropies
  auto co_information = [&](const std::vector<std::size_t>& sel) {
    double acc = 0.0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << sel.size()); ++mask) {
      std::vector<std::size_t> sub;
      for (std::size_t j = 0; j < sel.size(); ++j)
        if (mask & (std::size_t{1} << j)) sub.push_back(sel[j]);
      double h = exact_joint_entropy(t, sub);
      acc += (sub.size() % 2 == 1) ? h : -h;
    }
    return acc;
  };

  double partial = 0.0;
  for (std::size_t order = 1; order <= B; ++order) {
    double term = 0.0;
    // all size-`order` sub-subsets
    std::vector<std::size_t> idx(order);
    for (std::size_t j = 0; j < order; ++j) idx[j] = j;
    do {
      std::vector<std::size_t> sel;
      for (std::size_t j = 0; j < order; ++j) sel.push_back(subset[idx[j]]);
      term += order == 1 ? bald_direct(t, sel[0]) : co_information(sel);
    } while (next_combination(idx, B));
    partial += (order % 2 == 1) ? term : -term;
    report.partial_sums.push_back(partial);
    report.residuals.push_back(std::abs(partial - report.exact_mi));
  }
  return report;
}

OptimalBatch exhaustive_optimal_batch(const LogProbTensor& t,
                                      const std::vector<std::size_t>& pool,
                                      std::size_t b) {
  if (b < 1 || b > pool.size())
    throw ValidationError("exhaustive_optimal_batch: bad batch size");
  check_cap(t, b);
  OptimalBatch best;
  best.score = -std::numeric_limits<double>::infinity();

  std::vector<std::size_t> idx(b);
  for (std::size_t j = 0; j < b; ++j) idx[j] = j;
  do {
    std::vector<std::size_t> subset;
    for (std::size_t j = 0; j < b; ++j) subset.push_back(pool[idx[j]]);
    double score = exact_joint_mi(t, subset);
    // lexicographic iteration order makes the first max the smallest tuple
    if (score > best.score) {
      best.score = score;
      best.subset = subset;
    }
  } while (next_combination(idx, pool.size()));
  return best;
}

}  // namespace kbald::oracle
