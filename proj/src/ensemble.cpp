#include "kbald/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "kbald/common.hpp"
#include "kbald/parallel.hpp"
#include "kbald/rng.hpp"

namespace kbald {

namespace {

constexpr double kLatticeSpacing = 5.0;

std::vector<double> log_softmax(std::vector<double> logits) {
  double mx = *std::max_element(logits.begin(), logits.end());
  double acc = 0.0;
  for (double v : logits) acc += std::exp(v - mx);
  double lse = mx + std::log(acc);
  for (double& v : logits) v -= lse;
  return logits;
}

}  // namespace

SyntheticDataset generate_blobs(const BlobParams& params) {
  if (params.classes < 2)
    throw ValidationError("generate_blobs: need at least 2 classes");
  if (params.spread <= 0.0)
    throw ValidationError("generate_blobs: spread must be > 0");
  if (params.duplicate_fraction < 0.0 || params.duplicate_fraction >= 1.0)
    throw ValidationError("generate_blobs: duplicate_fraction in [0, 1)");
  if (params.dims < 2)
    throw ValidationError("generate_blobs: need dims >= 2");
  if (params.train_per_class < 1 || params.pool_per_class < 1 ||
      params.test_per_class < 1)
    throw ValidationError("generate_blobs: each split needs >= 1 per class");

  // the class-mean lattice is shared by all classes; grid covers C cells
  std::size_t grid = 1;
  while (grid * grid < params.classes) ++grid;

  SyntheticDataset data;
  data.n_classes = params.classes;
  data.dims = params.dims;
  data.seed = params.seed;
  Rng rng(params.seed);

  auto emit_split = [&](std::size_t per_class,
                        std::vector<std::size_t>& split) {
    for (std::size_t c = 0; c < params.classes; ++c) {
      double mean[2] = {static_cast<double>(c % grid) * kLatticeSpacing,
                        static_cast<double>(c / grid) * kLatticeSpacing};
      for (std::size_t p = 0; p < per_class; ++p) {
        split.push_back(data.labels.size());
        data.labels.push_back(c);
        for (std::size_t d = 0; d < params.dims; ++d) {
          double base = d < 2 ? mean[d] : 0.0;
          data.features.push_back(base + params.spread * rng.next_normal());
        }
      }
    }
  };

  emit_split(params.train_per_class, data.train_idx);
  emit_split(params.pool_per_class, data.pool_idx);
  emit_split(params.test_per_class, data.test_idx);

  // overwrite the tail of the pool with exact copies of earlier pool points
  std::size_t pool_n = data.pool_idx.size();
  std::size_t n_dup =
      static_cast<std::size_t>(params.duplicate_fraction * pool_n);
  std::size_t n_orig = pool_n - n_dup;
  for (std::size_t j = 0; j < n_dup; ++j) {
    std::size_t dst = data.pool_idx[n_orig + j];
    std::size_t src = data.pool_idx[rng.next_below(n_orig)];
    std::memcpy(data.features.data() + dst * data.dims,
                data.features.data() + src * data.dims,
                data.dims * sizeof(double));
    data.labels[dst] = data.labels[src];
  }
  return data;
}

std::vector<double> MlpMember::forward_log(const double* x) const {
  std::vector<double> h(hidden);
  for (std::size_t j = 0; j < hidden; ++j) {
    double acc = b1[j];
    for (std::size_t d = 0; d < in_dim; ++d) acc += w1[j * in_dim + d] * x[d];
    h[j] = std::tanh(acc);
  }
  std::vector<double> logits(out_dim);
  for (std::size_t c = 0; c < out_dim; ++c) {
    double acc = b2[c];
    for (std::size_t j = 0; j < hidden; ++j) acc += w2[c * hidden + j] * h[j];
    logits[c] = acc;
  }
  return log_softmax(std::move(logits));
}

namespace {

MlpMember init_member(std::size_t in_dim, std::size_t hidden,
                      std::size_t out_dim, std::uint64_t seed) {
  MlpMember m;
  m.in_dim = in_dim;
  m.hidden = hidden;
  m.out_dim = out_dim;
  Rng rng(seed);
  double s1 = 1.0 / std::sqrt(static_cast<double>(in_dim));
  double s2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  m.w1.resize(hidden * in_dim);
  m.b1.assign(hidden, 0.0);
  m.w2.resize(out_dim * hidden);
  m.b2.assign(out_dim, 0.0);
  for (double& w : m.w1) w = s1 * rng.next_normal();
  for (double& w : m.w2) w = s2 * rng.next_normal();
  return m;
}

// full-batch cross-entropy loss and gradient step; returns the loss
// before the update
double train_epoch(MlpMember& m, const SyntheticDataset& data,
                   const std::vector<std::size_t>& train, double lr) {
  const std::size_t n = train.size();
  std::vector<double> gw1(m.w1.size(), 0.0), gb1(m.b1.size(), 0.0);
  std::vector<double> gw2(m.w2.size(), 0.0), gb2(m.b2.size(), 0.0);
  double loss = 0.0;

  std::vector<double> h(m.hidden), pre(m.hidden);
  for (std::size_t idx : train) {
    const double* x = data.point(idx);
    for (std::size_t j = 0; j < m.hidden; ++j) {
      double acc = m.b1[j];
      for (std::size_t d = 0; d < m.in_dim; ++d)
        acc += m.w1[j * m.in_dim + d] * x[d];
      pre[j] = acc;
      h[j] = std::tanh(acc);
    }
    std::vector<double> logits(m.out_dim);
    for (std::size_t c = 0; c < m.out_dim; ++c) {
      double acc = m.b2[c];
      for (std::size_t j = 0; j < m.hidden; ++j)
        acc += m.w2[c * m.hidden + j] * h[j];
      logits[c] = acc;
    }
    auto logp = log_softmax(logits);
    std::size_t y = data.labels[idx];
    loss -= logp[y];

    // dL/dlogits = softmax - onehot
    std::vector<double> dlogits(m.out_dim);
    for (std::size_t c = 0; c < m.out_dim; ++c)
      dlogits[c] = std::exp(logp[c]) - (c == y ? 1.0 : 0.0);
    std::vector<double> dh(m.hidden, 0.0);
    for (std::size_t c = 0; c < m.out_dim; ++c) {
      gb2[c] += dlogits[c];
      for (std::size_t j = 0; j < m.hidden; ++j) {
        gw2[c * m.hidden + j] += dlogits[c] * h[j];
        dh[j] += dlogits[c] * m.w2[c * m.hidden + j];
      }
    }
    for (std::size_t j = 0; j < m.hidden; ++j) {
      double dpre = dh[j] * (1.0 - h[j] * h[j]);
      gb1[j] += dpre;
      for (std::size_t d = 0; d < m.in_dim; ++d)
        gw1[j * m.in_dim + d] += dpre * x[d];
    }
  }

  double scale = lr / static_cast<double>(n);
  for (std::size_t i = 0; i < m.w1.size(); ++i) m.w1[i] -= scale * gw1[i];
  for (std::size_t i = 0; i < m.b1.size(); ++i) m.b1[i] -= scale * gb1[i];
  for (std::size_t i = 0; i < m.w2.size(); ++i) m.w2[i] -= scale * gw2[i];
  for (std::size_t i = 0; i < m.b2.size(); ++i) m.b2[i] -= scale * gb2[i];
  return loss / static_cast<double>(n);
}

}  // namespace

EnsembleModel train_ensemble(const SyntheticDataset& data,
                             const TrainParams& params,
                             const std::vector<std::size_t>& train_subset,
                             unsigned threads) {
  if (params.members < 2)
    throw ValidationError("train_ensemble: need at least 2 members");
  const std::vector<std::size_t>& train =
      train_subset.empty() ? data.train_idx : train_subset;
  if (train.empty())
    throw ValidationError("train_ensemble: train split is empty");

  EnsembleModel model;
  model.members.resize(params.members);
  model.initial_losses.resize(params.members);
  model.final_losses.resize(params.members);

  parallel_for(params.members, threads, [&](std::size_t e) {
    MlpMember m = init_member(data.dims, params.hidden, data.n_classes,
                              params.seed + e);
    double first = 0.0, last = 0.0;
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
      last = train_epoch(m, data, train, params.lr);
      if (epoch == 0) first = last;
      if (std::isnan(last))
        throw std::runtime_error("train_ensemble: loss diverged (NaN) in member " +
                                 std::to_string(e));
    }
    model.members[e] = std::move(m);
    model.initial_losses[e] = first;
    model.final_losses[e] = last;
  });
  return model;
}

LogProbTensor predict_logprobs(const EnsembleModel& model,
                               const SyntheticDataset& data,
                               const std::vector<std::size_t>& points) {
  if (model.members.empty())
    throw ValidationError("predict_logprobs: empty ensemble");
  LogProbTensor t;
  t.n_points = points.size();
  t.n_samples = model.members.size();
  t.n_classes = model.members[0].out_dim;
  t.data.resize(t.n_points * t.n_samples * t.n_classes);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double* x = data.point(points[i]);
    for (std::size_t s = 0; s < t.n_samples; ++s) {
      auto logp = model.members[s].forward_log(x);
      for (std::size_t c = 0; c < t.n_classes; ++c) t.at(i, s, c) = logp[c];
    }
  }
  return t;
}

double ensemble_accuracy(const EnsembleModel& model,
                         const SyntheticDataset& data,
                         const std::vector<std::size_t>& points) {
  if (points.empty()) throw ValidationError("ensemble_accuracy: no points");
  std::size_t correct = 0;
  const std::size_t C = model.members[0].out_dim;
  for (std::size_t idx : points) {
    std::vector<double> mean(C, 0.0);
    for (const auto& m : model.members) {
      auto logp = m.forward_log(data.point(idx));
      for (std::size_t c = 0; c < C; ++c) mean[c] += std::exp(logp[c]);
    }
    std::size_t best =
        std::max_element(mean.begin(), mean.end()) - mean.begin();
    if (best == data.labels[idx]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(points.size());
}

}  // namespace kbald
