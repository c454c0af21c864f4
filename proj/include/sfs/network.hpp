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

#ifndef SFS_NETWORK_HPP_
#define SFS_NETWORK_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sfs/packing.hpp"

namespace sfs {

enum class LayerKind : std::uint32_t { kConv = 0, kTransposedConv = 1 };

struct LayerSpec {
  LayerKind kind = LayerKind::kConv;
  int in_channels = 1;
  int out_channels = 1;
  int kernel_h = 3;
  int kernel_w = 3;
  int stride_h = 2;
  int stride_w = 2;
  int pad_h = 0;
  int pad_w = 0;
  int out_pad_h = 0;
  int out_pad_w = 0;
  bool prelu = true;
  // Spatial sizes, filled in by resolve_shapes().
  int in_h = 0;
  int in_w = 0;
  int out_h = 0;
  int out_w = 0;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

// Output of layer `from` is added to the output of layer `to`; the sum feeds
// layer to + 1.
struct SkipConnection {
  std::size_t from = 0;
  std::size_t to = 0;

  friend bool operator==(const SkipConnection&, const SkipConnection&) = default;
};

struct NetworkSpec {
  int rows = 0;
  int cols = 0;
  std::vector<LayerSpec> layers;
  std::optional<SkipConnection> skip;

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

int conv_output_size(int in, int kernel, int stride, int pad);
int transposed_output_size(int in, int kernel, int stride, int pad, int out_pad);

// Propagates spatial sizes through the layer list and checks channel counts,
// the skip connection and that the output is 1 x rows x cols. Throws
// std::invalid_argument on any inconsistency.
void resolve_shapes(NetworkSpec& spec);

// The seven-layer compensation network for a rows x cols input: strided
// convolutions with 128, 256, 512 filters, transposed convolutions with 256,
// 128, 128 filters, a final linear stride-1 layer with one filter, and a skip
// from layer 1 to layer 3 (0-based). Decoder kernels are 3 or 4 per axis so
// that each decoder stage restores the matching encoder size. Needs rows and
// cols >= 15.
NetworkSpec compensator_network(int rows, int cols);

// Two strided convolutions and two transposed convolutions with `channels`
// filters, skip from layer 0 to layer 2. Needs rows and cols >= 7.
NetworkSpec miniature_network(int rows, int cols, int channels);

// Convolution weights are [C_out, kh*kw*C_in], transposed convolution
// weights [C_in, kh*kw*C_out]; the channel index runs fastest. `slope` is
// empty for linear layers.
struct LayerParams {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
  Eigen::VectorXd slope;
};

struct ModelParams {
  NetworkSpec spec;
  std::vector<LayerParams> layers;

  std::size_t parameter_count() const;
};

using ModelGradients = std::vector<LayerParams>;

inline constexpr double kPreluInitialSlope = 0.25;

// Fan-in scaled normal weights (gain sqrt(2 / (1 + a^2)) for PReLU layers),
// zero biases, PReLU slopes 0.25.
ModelParams init_params(const NetworkSpec& spec, std::uint64_t seed);
// All weights and biases zero, slopes 0.25.
ModelParams zero_params(const NetworkSpec& spec);
// Gradients shaped like the parameters, all zero.
ModelGradients zero_gradients(const ModelParams& params);

// Activations are stored as [C, B*H*W]: one column per pixel, samples in
// consecutive blocks of H*W columns, pixel (y, x) at y*W + x.
struct ForwardCache {
  int batch = 0;
  std::vector<Eigen::MatrixXd> inputs;
  std::vector<Eigen::MatrixXd> pre;
  std::vector<Eigen::MatrixXd> outputs;
  std::vector<Eigen::MatrixXd> cols;
};

Eigen::MatrixXd forward(const ModelParams& params, const Eigen::MatrixXd& x, int batch,
                        ForwardCache* cache = nullptr);

// Accumulates dLoss/dparams into `grads` given dLoss/doutput.
void backward(const ModelParams& params, const ForwardCache& cache,
              const Eigen::MatrixXd& grad_output, ModelGradients& grads);

// Places sample `b` of a batch into / out of the activation layout.
void store_sample(const PackedTensor& t, int b, Eigen::MatrixXd& x);
PackedTensor load_sample(const Eigen::MatrixXd& y, int b, int rows, int cols);

// Single-sample forward pass. Throws std::invalid_argument when the tensor
// shape differs from the network's input shape.
PackedTensor cnn_forward(const PackedTensor& t, const ModelParams& params);

// Binary checkpoint: magic "SFSM", version, (L, K), layer table, skip, then
// float64 parameters in layer order (weight, bias, slope). A JSON sidecar
// `<path>.json` mirrors the layer table.
void save_checkpoint(const std::filesystem::path& path, const ModelParams& params);
ModelParams load_checkpoint(const std::filesystem::path& path);

}  // namespace sfs

#endif  // SFS_NETWORK_HPP_
