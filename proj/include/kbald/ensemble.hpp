#pragma once

#include <cstdint>
#include <vector>

#include "kbald/tensor.hpp"

namespace kbald {

// Deterministic Gaussian-blob classification dataset with train / pool /
// test splits. Class means sit on a fixed lattice in the first two
// feature dimensions; a fraction of pool points are exact copies of
// other pool points (redundancy fixtures).
struct SyntheticDataset {
  std::size_t n_classes = 0;
  std::size_t dims = 0;
  std::vector<double> features;      // [point][dim] row-major
  std::vector<std::size_t> labels;
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> pool_idx;
  std::vector<std::size_t> test_idx;
  std::uint64_t seed = 0;

  std::size_t n_points() const { return labels.size(); }
  const double* point(std::size_t i) const { return features.data() + i * dims; }
};

struct BlobParams {
  std::uint64_t seed = 0;
  std::size_t classes = 2;
  std::size_t pool_per_class = 10;
  std::size_t train_per_class = 5;
  std::size_t test_per_class = 20;
  std::size_t dims = 2;
  double spread = 1.0;
  double duplicate_fraction = 0.0;  // fraction of pool points that are copies
};

SyntheticDataset generate_blobs(const BlobParams& params);

// One-hidden-layer feedforward classifier with tanh nonlinearity and a
// log-softmax output head.
struct MlpMember {
  std::size_t in_dim = 0, hidden = 0, out_dim = 0;
  std::vector<double> w1, b1;  // hidden x in, hidden
  std::vector<double> w2, b2;  // out x hidden, out

  // log-softmax outputs for one input
  std::vector<double> forward_log(const double* x) const;
};

// E independently initialized members acting as posterior samples
// omega_1..omega_E.
struct EnsembleModel {
  std::vector<MlpMember> members;
  std::vector<double> initial_losses;  // per member, at epoch 0
  std::vector<double> final_losses;
};

struct TrainParams {
  std::size_t members = 10;
  std::size_t hidden = 16;
  std::size_t epochs = 300;
  double lr = 0.5;
  std::uint64_t seed = 0;
};

// Trains each member by full-batch gradient descent on cross-entropy
// from an independent random initialization (seed + member index).
// Members are independent and may train on separate threads;
// the result does not depend on the schedule.
EnsembleModel train_ensemble(const SyntheticDataset& data,
                             const TrainParams& params,
                             const std::vector<std::size_t>& train_subset = {},
                             unsigned threads = 1);

// Member log-softmax predictions for the given points: an
// n x E x C LogProbTensor with the sample axis holding the members.
LogProbTensor predict_logprobs(const EnsembleModel& model,
                               const SyntheticDataset& data,
                               const std::vector<std::size_t>& points);

// Accuracy of the mean ensemble predictive (argmax) on the given points.
double ensemble_accuracy(const EnsembleModel& model,
                         const SyntheticDataset& data,
                         const std::vector<std::size_t>& points);

}  // namespace kbald
