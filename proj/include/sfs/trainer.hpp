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

#ifndef SFS_TRAINER_HPP_
#define SFS_TRAINER_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfs/loss.hpp"
#include "sfs/network.hpp"
#include "sfs/renderers.hpp"

namespace sfs {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct TrainConfig {
  double learning_rate = 1e-4;
  std::size_t max_epochs = 5000;
  std::size_t patience = 100;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  AdamConfig adam;

  // Throws std::invalid_argument unless lr > 0, batch >= 1 and
  // patience <= max_epochs.
  void validate() const;
};

// One packed MR driving tensor and the control-point pressures it should
// reproduce after compensation.
struct TrainingSample {
  PackedTensor input;
  ComplexMatrix target;
};

struct EpochReport {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  bool improved = false;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochReport> history;
  std::size_t best_epoch = 0;
  double best_val_loss = 0.0;
};

class TrainingError : public std::runtime_error {
 public:
  TrainingError(const std::string& what, std::size_t epoch)
      : std::runtime_error(what + " at epoch " + std::to_string(epoch)), epoch_(epoch) {}
  std::size_t epoch() const { return epoch_; }

 private:
  std::size_t epoch_;
};

using EpochCallback = std::function<void(const EpochReport&)>;

// Mean loss of the network over `samples`.
double evaluate_loss(const ModelParams& params, std::span<const TrainingSample> samples,
                     std::span<const ComplexMatrix> transfer, const LossWeights& w);

// Loss of a batch and its gradient with respect to every parameter.
double loss_and_gradients(const ModelParams& params, std::span<const TrainingSample> batch,
                          std::span<const ComplexMatrix> transfer, const LossWeights& w,
                          ModelGradients& grads);

// Adam on shuffled mini-batches starting from `initial`. After each epoch the
// validation loss is compared with the best so far; `patience` consecutive
// epochs without a strict improvement stop training. Returns the parameters
// of the best validation epoch. Shuffling uses `cfg.seed`, so runs are
// reproducible.
TrainResult train_compensator(const ModelParams& initial, std::span<const TrainingSample> train,
                              std::span<const TrainingSample> val,
                              std::span<const ComplexMatrix> transfer, const LossWeights& w,
                              const TrainConfig& cfg, const EpochCallback& on_epoch = {});

// Packs, runs the network and unpacks. Throws std::invalid_argument when the
// signals do not match the network's (2L, K).
DrivingSignals compensate(const DrivingSignals& mr, const ModelParams& params);

}  // namespace sfs

#endif  // SFS_TRAINER_HPP_
