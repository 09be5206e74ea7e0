#include "kbald/prob_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "kbald/common.hpp"

namespace kbald {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logsumexp(std::span<const double> xs) {
  double mx = kNegInf;
  for (double x : xs) mx = std::max(mx, x);
  if (mx == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - mx);
  return mx + std::log(acc);
}

}  // namespace

void LogProbTensor::validate() const {
  if (n_points < 1 || n_samples < 1 || n_classes < 2)
    throw ValidationError("LogProbTensor: need N >= 1, S >= 1, C >= 2");
  if (data.size() != n_points * n_samples * n_classes)
    throw ValidationError("LogProbTensor: data size does not match shape");
  for (std::size_t i = 0; i < n_points; ++i) {
    for (std::size_t s = 0; s < n_samples; ++s) {
      auto r = row(i, s);
      for (double v : r) {
        if (std::isnan(v) || v > 1e-9)
          throw ValidationError("LogProbTensor: entry out of range at point " +
                                std::to_string(i) + " sample " +
                                std::to_string(s));
      }
      double lse = logsumexp(r);
      if (std::abs(lse) > 1e-6)
        throw ValidationError("LogProbTensor: row not normalized at point " +
                              std::to_string(i) + " sample " +
                              std::to_string(s) + " (logsumexp = " +
                              std::to_string(lse) + ")");
    }
  }
}

void Distribution::validate(double tol) const {
  double sum = 0.0;
  for (double p : probs) {
    if (std::isnan(p) || p < -tol || p > 1.0 + tol)
      throw ValidationError("Distribution: entry outside [0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol)
    throw ValidationError("Distribution: sum = " + std::to_string(sum) +
                          ", expected 1");
}

double entropy(const Distribution& d) {
  d.validate();
  double h = 0.0;
  for (double p : d.probs)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

double nats_to_bits(double nats) { return nats / std::log(2.0); }

Distribution marginal_predictive(const LogProbTensor& t, std::size_t i) {
  if (i >= t.n_points)
    throw ValidationError("marginal_predictive: point index out of range");
  const std::size_t S = t.n_samples, C = t.n_classes;
  Distribution d;
  d.probs.assign(C, 0.0);
  for (std::size_t c = 0; c < C; ++c) {
    // logsumexp over the sample axis, minus ln S
    double mx = kNegInf;
    for (std::size_t s = 0; s < S; ++s) mx = std::max(mx, t.at(i, s, c));
    if (mx == kNegInf) continue;
    double acc = 0.0;
    for (std::size_t s = 0; s < S; ++s) acc += std::exp(t.at(i, s, c) - mx);
    d.probs[c] = std::exp(mx) * acc / static_cast<double>(S);
  }
  return d;
}

namespace detail {

void check_subset(const LogProbTensor& t,
                  const std::vector<std::size_t>& subset,
                  bool allow_duplicates) {
  if (subset.empty()) throw ValidationError("subset must be nonempty");
  for (std::size_t i : subset)
    if (i >= t.n_points)
      throw ValidationError("subset index " + std::to_string(i) +
                            " out of range (N = " +
                            std::to_string(t.n_points) + ")");
  if (!allow_duplicates) {
    std::set<std::size_t> uniq(subset.begin(), subset.end());
    if (uniq.size() != subset.size())
      throw ValidationError(
          "duplicate indices in subset (pass the duplicate flag to allow)");
  }
}

}  // namespace detail

Distribution joint_predictive(const LogProbTensor& t,
                              const std::vector<std::size_t>& subset,
                              std::size_t cap, bool allow_duplicates) {
  detail::check_subset(t, subset, allow_duplicates);
  const std::size_t B = subset.size(), S = t.n_samples, C = t.n_classes;
  double n_configs_d = std::pow(static_cast<double>(C), static_cast<double>(B));
  if (n_configs_d > static_cast<double>(cap))
    throw InfeasibleError(
        "joint_predictive: enumeration infeasible, C^B = " +
        std::to_string(n_configs_d) + " exceeds cap " + std::to_string(cap) +
        "; use the Monte-Carlo estimator instead");
  std::size_t n_configs = static_cast<std::size_t>(n_configs_d);

  Distribution d;
  d.probs.assign(n_configs, 0.0);
  std::vector<double> per_sample(n_configs);
  for (std::size_t s = 0; s < S; ++s) {
    per_sample.assign(1, 1.0);
    // extend one point at a time; first index varies slowest
    for (std::size_t m = 0; m < B; ++m) {
      std::vector<double> next(per_sample.size() * C);
      auto r = t.row(subset[m], s);
      for (std::size_t q = 0; q < per_sample.size(); ++q)
        for (std::size_t c = 0; c < C; ++c)
          next[q * C + c] = per_sample[q] * std::exp(r[c]);
      per_sample = std::move(next);
    }
    for (std::size_t q = 0; q < n_configs; ++q) d.probs[q] += per_sample[q];
  }
  const double inv_s = 1.0 / static_cast<double>(S);
  for (double& p : d.probs) p *= inv_s;
  d.validate(1e-6);
  return d;
}

double mc_joint_entropy(const LogProbTensor& t,
                        const std::vector<std::size_t>& subset, std::size_t m,
                        std::uint64_t seed, bool allow_duplicates) {
  detail::check_subset(t, subset, allow_duplicates);
  if (m < 1) throw ValidationError("mc_joint_entropy: m must be >= 1");
  const std::size_t B = subset.size(), S = t.n_samples, C = t.n_classes;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_s(0, S - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<std::size_t> config(B);
  std::vector<double> per_sample_logp(S);
  double acc = 0.0;
  for (std::size_t draw = 0; draw < m; ++draw) {
    std::size_t s = pick_s(rng);
    for (std::size_t j = 0; j < B; ++j) {
      auto r = t.row(subset[j], s);
      double u = unif(rng);
      double cum = 0.0;
      std::size_t y = C - 1;
      for (std::size_t c = 0; c < C; ++c) {
        cum += std::exp(r[c]);
        if (u < cum) {
          y = c;
          break;
        }
      }
      config[j] = y;
    }
    // log p_hat(config) = logsumexp_s sum_j logp - ln S
    for (std::size_t sp = 0; sp < S; ++sp) {
      double lp = 0.0;
      for (std::size_t j = 0; j < B; ++j)
        lp += t.at(subset[j], sp, config[j]);
      per_sample_logp[sp] = lp;
    }
    acc += logsumexp(per_sample_logp) - std::log(static_cast<double>(S));
  }
  return -acc / static_cast<double>(m);
}

double mean_conditional_entropy(const LogProbTensor& t, std::size_t i) {
  if (i >= t.n_points)
    throw ValidationError("mean_conditional_entropy: index out of range");
  const std::size_t S = t.n_samples, C = t.n_classes;
  double acc = 0.0;
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t c = 0; c < C; ++c) {
      double lp = t.at(i, s, c);
      if (lp != kNegInf) acc -= std::exp(lp) * lp;
    }
  }
  return acc / static_cast<double>(S);
}

}  // namespace kbald
