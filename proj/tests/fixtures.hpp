#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "kbald/rng.hpp"
#include "kbald/tensor.hpp"

namespace kbald::testing {

// random normalized log-prob tensor (logits ~ 2 * N(0,1), log-softmaxed)
inline LogProbTensor random_tensor(std::size_t n, std::size_t s,
                                   std::size_t c, std::uint64_t seed) {
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

// tensor from explicit per-(point, sample) linear-space rows
inline LogProbTensor tensor_from_probs(
    const std::vector<std::vector<std::vector<double>>>& rows) {
  LogProbTensor t;
  t.n_points = rows.size();
  t.n_samples = rows[0].size();
  t.n_classes = rows[0][0].size();
  t.data.resize(t.n_points * t.n_samples * t.n_classes);
  for (std::size_t i = 0; i < t.n_points; ++i)
    for (std::size_t s = 0; s < t.n_samples; ++s)
      for (std::size_t c = 0; c < t.n_classes; ++c)
        t.at(i, s, c) = std::log(rows[i][s][c]);
  return t;
}

// two binary points, perfectly correlated: sample 1 one-hot class 0 for
// both, sample 2 one-hot class 1 for both; extendable to n copies
inline LogProbTensor correlated_onehot_pair(std::size_t n_points = 2) {
  std::vector<std::vector<std::vector<double>>> rows(
      n_points, {{1.0, 0.0}, {0.0, 1.0}});
  return tensor_from_probs(rows);
}

}  // namespace kbald::testing
