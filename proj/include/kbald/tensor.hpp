#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kbald {

// N x S x C array of log-probabilities log p(y = c | x_i, omega_s).
// The sample axis holds the posterior samples (ensemble members or
// MC-dropout masks); each (i, s) row is a normalized log-distribution.
// Entries may be -infinity (probability exactly 0).
struct LogProbTensor {
  std::size_t n_points = 0;
  std::size_t n_samples = 0;
  std::size_t n_classes = 0;
  std::vector<double> data;  // [i][s][c] row-major

  double at(std::size_t i, std::size_t s, std::size_t c) const {
    return data[(i * n_samples + s) * n_classes + c];
  }
  double& at(std::size_t i, std::size_t s, std::size_t c) {
    return data[(i * n_samples + s) * n_classes + c];
  }
  std::span<const double> row(std::size_t i, std::size_t s) const {
    return {data.data() + (i * n_samples + s) * n_classes, n_classes};
  }

  // Throws ValidationError unless N >= 1, S >= 1, C >= 2, every entry
  // <= 1e-9, and every (i, s) row satisfies logsumexp = 0 within 1e-6.
  void validate() const;
};

// A probability distribution in linear space (marginal or joint
// predictive over label configurations).
struct Distribution {
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }

  // Throws ValidationError unless entries are in [0, 1] and sum to 1
  // within the given tolerance.
  void validate(double tol = 1e-9) const;
};

}  // namespace kbald
