#pragma once

#include <cstdint>
#include <vector>

#include "kbald/tensor.hpp"

namespace kbald {

// Largest number of label configurations C^{|subset|} that exact
// enumeration will attempt before refusing with InfeasibleError.
inline constexpr std::size_t kDefaultEnumerationCap = std::size_t{1} << 20;

// Shannon entropy -sum p ln p in nats, with 0 ln 0 = 0.
double entropy(const Distribution& d);

// nats -> bits, for reporting.
double nats_to_bits(double nats);

// p(y | x_i) = (1/S) sum_s exp(data[i][s][.]), computed in log space
// with a per-row max shift.
Distribution marginal_predictive(const LogProbTensor& t, std::size_t i);

// Joint predictive p(y_1..y_k) over C^k configurations, averaged over
// the sample axis. Configuration order is row-major with the first
// subset index varying slowest. Duplicate indices require the explicit
// flag (used by duplicate-point fixtures).
Distribution joint_predictive(const LogProbTensor& t,
                              const std::vector<std::size_t>& subset,
                              std::size_t cap = kDefaultEnumerationCap,
                              bool allow_duplicates = false);

// Monte-Carlo plug-in estimate of the joint predictive entropy: draws m
// configurations (s uniform, then y per point from p(.|x, omega_s)) and
// returns -(1/m) sum log p_hat(y). Deterministic given seed.
double mc_joint_entropy(const LogProbTensor& t,
                        const std::vector<std::size_t>& subset,
                        std::size_t m, std::uint64_t seed,
                        bool allow_duplicates = false);

// Mean conditional entropy (1/S) sum_s H[p(.|x_i, omega_s)] -- the
// H[Y|x, Omega] term of the scores.
double mean_conditional_entropy(const LogProbTensor& t, std::size_t i);

namespace detail {
// Bounds/distinctness checks shared by the subset operations.
void check_subset(const LogProbTensor& t,
                  const std::vector<std::size_t>& subset,
                  bool allow_duplicates);
}  // namespace detail

}  // namespace kbald
