// Copyright 2026 The sfs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sfs/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace sfs {
namespace {

Eigen::MatrixXd stack_inputs(const ModelParams& params, std::span<const TrainingSample> batch) {
  const NetworkSpec& spec = params.spec;
  Eigen::MatrixXd x(1, static_cast<Eigen::Index>(batch.size()) * spec.rows * spec.cols);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    if (batch[b].input.rows() != spec.rows || batch[b].input.cols() != spec.cols) {
      throw std::invalid_argument("training sample does not match the network input shape");
    }
    store_sample(batch[b].input, static_cast<int>(b), x);
  }
  return x;
}

ComplexMatrix predict(const PackedTensor& y, std::span<const ComplexMatrix> transfer) {
  return predict_control_pressure(unpack_driving(y), transfer);
}

struct AdamState {
  std::vector<LayerParams> m;
  std::vector<LayerParams> v;
  std::size_t step = 0;
};

void adam_update(Eigen::Ref<Eigen::ArrayXd> p, Eigen::Ref<Eigen::ArrayXd> m,
                 Eigen::Ref<Eigen::ArrayXd> v, const Eigen::Ref<const Eigen::ArrayXd>& g,
                 double lr, const AdamConfig& a, double c1, double c2) {
  m = a.beta1 * m + (1.0 - a.beta1) * g;
  v = a.beta2 * v + (1.0 - a.beta2) * g.square();
  p -= lr * (m / c1) / ((v / c2).sqrt() + a.epsilon);
}

Eigen::Map<Eigen::ArrayXd> flat(Eigen::MatrixXd& m) { return {m.data(), m.size()}; }
Eigen::Map<Eigen::ArrayXd> flat(Eigen::VectorXd& m) { return {m.data(), m.size()}; }
Eigen::Map<const Eigen::ArrayXd> flat(const Eigen::MatrixXd& m) { return {m.data(), m.size()}; }
Eigen::Map<const Eigen::ArrayXd> flat(const Eigen::VectorXd& m) { return {m.data(), m.size()}; }

void adam_step(ModelParams& params, const ModelGradients& grads, AdamState& state,
               const TrainConfig& cfg) {
  ++state.step;
  const double c1 = 1.0 - std::pow(cfg.adam.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(cfg.adam.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    LayerParams& p = params.layers[i];
    LayerParams& m = state.m[i];
    LayerParams& v = state.v[i];
    const LayerParams& g = grads[i];
    adam_update(flat(p.weight), flat(m.weight), flat(v.weight), flat(g.weight),
                cfg.learning_rate, cfg.adam, c1, c2);
    adam_update(flat(p.bias), flat(m.bias), flat(v.bias), flat(g.bias), cfg.learning_rate,
                cfg.adam, c1, c2);
    if (p.slope.size() > 0) {
      adam_update(flat(p.slope), flat(m.slope), flat(v.slope), flat(g.slope),
                  cfg.learning_rate, cfg.adam, c1, c2);
    }
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be > 0");
  if (batch_size == 0) throw std::invalid_argument("batch size must be >= 1");
  if (patience > max_epochs) throw std::invalid_argument("patience must not exceed max epochs");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0 && adam.beta2 >= 0.0 && adam.beta2 < 1.0) ||
      !(adam.epsilon > 0.0)) {
    throw std::invalid_argument("invalid Adam hyperparameters");
  }
}

double evaluate_loss(const ModelParams& params, std::span<const TrainingSample> samples,
                     std::span<const ComplexMatrix> transfer, const LossWeights& w) {
  if (samples.empty()) throw std::invalid_argument("evaluate_loss: no samples");
  constexpr std::size_t kChunk = 64;
  double sum = 0.0;
  for (std::size_t start = 0; start < samples.size(); start += kChunk) {
    const auto chunk = samples.subspan(start, std::min(kChunk, samples.size() - start));
    const Eigen::MatrixXd y = forward(params, stack_inputs(params, chunk),
                                      static_cast<int>(chunk.size()));
    for (std::size_t b = 0; b < chunk.size(); ++b) {
      const PackedTensor out =
          load_sample(y, static_cast<int>(b), params.spec.rows, params.spec.cols);
      sum += pressure_loss(predict(out, transfer), chunk[b].target, w);
    }
  }
  return sum / static_cast<double>(samples.size());
}

double loss_and_gradients(const ModelParams& params, std::span<const TrainingSample> batch,
                          std::span<const ComplexMatrix> transfer, const LossWeights& w,
                          ModelGradients& grads) {
  if (batch.empty()) throw std::invalid_argument("loss_and_gradients: empty batch");
  const NetworkSpec& spec = params.spec;
  const int n = static_cast<int>(batch.size());
  ForwardCache cache;
  const Eigen::MatrixXd y = forward(params, stack_inputs(params, batch), n, &cache);
  Eigen::MatrixXd dy(1, y.cols());
  const Eigen::Index half = spec.rows / 2;
  double sum = 0.0;
  ComplexMatrix dp;
  for (int b = 0; b < n; ++b) {
    const PackedTensor out = load_sample(y, b, spec.rows, spec.cols);
    const ComplexMatrix d = unpack_driving(out);
    const ComplexMatrix p = predict_control_pressure(d, transfer);
    sum += pressure_loss_gradient(p, batch[static_cast<std::size_t>(b)].target, w, dp);
    PackedTensor dt(spec.rows, spec.cols);
    for (Eigen::Index k = 0; k < d.cols(); ++k) {
      const ComplexVector dd = transfer[static_cast<std::size_t>(k)].adjoint() * dp.col(k);
      dt.col(k).head(half) = dd.real() / n;
      dt.col(k).tail(half) = dd.imag() / n;
    }
    store_sample(dt, b, dy);
  }
  backward(params, cache, dy, grads);
  return sum / n;
}

TrainResult train_compensator(const ModelParams& initial, std::span<const TrainingSample> train,
                              std::span<const TrainingSample> val,
                              std::span<const ComplexMatrix> transfer, const LossWeights& w,
                              const TrainConfig& cfg, const EpochCallback& on_epoch) {
  cfg.validate();
  w.validate();
  if (train.empty() || val.empty()) {
    throw std::invalid_argument("training needs non-empty train and validation splits");
  }
  ModelParams params = initial;
  AdamState state{zero_gradients(params), zero_gradients(params), 0};
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<TrainingSample> batch;

  TrainResult result{params, {}, 0, std::numeric_limits<double>::infinity()};
  std::size_t wait = 0;
  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double train_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(train[order[i]]);
      ModelGradients grads = zero_gradients(params);
      const double loss = loss_and_gradients(params, batch, transfer, w, grads);
      if (!std::isfinite(loss)) throw TrainingError("training loss is not finite", epoch);
      train_sum += loss * static_cast<double>(batch.size());
      adam_step(params, grads, state, cfg);
    }
    EpochReport report;
    report.epoch = epoch;
    report.train_loss = train_sum / static_cast<double>(train.size());
    report.val_loss = evaluate_loss(params, val, transfer, w);
    if (!std::isfinite(report.val_loss)) {
      throw TrainingError("validation loss is not finite", epoch);
    }
    report.improved = report.val_loss < result.best_val_loss;
    result.history.push_back(report);
    if (on_epoch) on_epoch(report);
    if (report.improved) {
      result.best_val_loss = report.val_loss;
      result.best_epoch = epoch;
      result.params = params;
      wait = 0;
    } else if (++wait >= cfg.patience) {
      break;
    }
  }
  return result;
}

DrivingSignals compensate(const DrivingSignals& mr, const ModelParams& params) {
  if (2 * mr.values.rows() != params.spec.rows || mr.values.cols() != params.spec.cols) {
    throw std::invalid_argument("compensate: driving signals do not match the trained geometry");
  }
  return {unpack_driving(cnn_forward(pack_driving(mr.values), params)), Provenance::kCnn};
}

}  // namespace sfs
