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

#include "sfs/network.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "json.hpp"

#include "sfs/io.hpp"

namespace sfs {
namespace {

constexpr std::uint32_t kCheckpointVersion = 1;

struct Grid {
  int channels;
  int h;
  int w;
};

// Gathers kh x kw patches of `src` ([C, B*H*W]) into [kh*kw*C, B*Ho*Wo] for
// an Ho x Wo output grid. Out-of-range taps read zero.
Eigen::MatrixXd im2col(const Eigen::MatrixXd& src, Grid g, int batch, const LayerSpec& s,
                       int out_h, int out_w) {
  const Eigen::Index c = g.channels;
  Eigen::MatrixXd col = Eigen::MatrixXd::Zero(s.kernel_h * s.kernel_w * c,
                                              static_cast<Eigen::Index>(batch) * out_h * out_w);
  for (int b = 0; b < batch; ++b) {
    for (int oy = 0; oy < out_h; ++oy) {
      for (int ox = 0; ox < out_w; ++ox) {
        const Eigen::Index dst = (static_cast<Eigen::Index>(b) * out_h + oy) * out_w + ox;
        for (int ky = 0; ky < s.kernel_h; ++ky) {
          const int iy = oy * s.stride_h - s.pad_h + ky;
          if (iy < 0 || iy >= g.h) continue;
          for (int kx = 0; kx < s.kernel_w; ++kx) {
            const int ix = ox * s.stride_w - s.pad_w + kx;
            if (ix < 0 || ix >= g.w) continue;
            const Eigen::Index from = (static_cast<Eigen::Index>(b) * g.h + iy) * g.w + ix;
            col.col(dst).segment((ky * s.kernel_w + kx) * c, c) = src.col(from);
          }
        }
      }
    }
  }
  return col;
}

// Adjoint of im2col: scatters-adds patches back onto a [C, B*H*W] image.
Eigen::MatrixXd col2im(const Eigen::MatrixXd& col, Grid g, int batch, const LayerSpec& s,
                       int out_h, int out_w) {
  const Eigen::Index c = g.channels;
  Eigen::MatrixXd img = Eigen::MatrixXd::Zero(c, static_cast<Eigen::Index>(batch) * g.h * g.w);
  for (int b = 0; b < batch; ++b) {
    for (int oy = 0; oy < out_h; ++oy) {
      for (int ox = 0; ox < out_w; ++ox) {
        const Eigen::Index from = (static_cast<Eigen::Index>(b) * out_h + oy) * out_w + ox;
        for (int ky = 0; ky < s.kernel_h; ++ky) {
          const int iy = oy * s.stride_h - s.pad_h + ky;
          if (iy < 0 || iy >= g.h) continue;
          for (int kx = 0; kx < s.kernel_w; ++kx) {
            const int ix = ox * s.stride_w - s.pad_w + kx;
            if (ix < 0 || ix >= g.w) continue;
            const Eigen::Index dst = (static_cast<Eigen::Index>(b) * g.h + iy) * g.w + ix;
            img.col(dst) += col.col(from).segment((ky * s.kernel_w + kx) * c, c);
          }
        }
      }
    }
  }
  return img;
}

LayerSpec conv_layer(int in_c, int out_c) {
  LayerSpec s;
  s.kind = LayerKind::kConv;
  s.in_channels = in_c;
  s.out_channels = out_c;
  return s;
}

// Stride-2 transposed layer whose kernel (3 or 4 per axis) maps in -> target.
LayerSpec transposed_layer(int in_c, int out_c, int in_h, int in_w, int target_h,
                           int target_w) {
  const auto pick = [](int in, int target) {
    for (int k : {3, 4}) {
      if (transposed_output_size(in, k, 2, 0, 0) == target) return k;
    }
    throw std::invalid_argument("no 3/4 kernel maps " + std::to_string(in) + " to " +
                                std::to_string(target));
  };
  LayerSpec s;
  s.kind = LayerKind::kTransposedConv;
  s.in_channels = in_c;
  s.out_channels = out_c;
  s.kernel_h = pick(in_h, target_h);
  s.kernel_w = pick(in_w, target_w);
  return s;
}

int fan_in(const LayerSpec& s) {
  const int taps = s.kernel_h * s.kernel_w;
  if (s.kind == LayerKind::kConv) return s.in_channels * taps;
  // Average number of inputs reaching one output of a transposed layer.
  return std::max(1, s.in_channels * taps / (s.stride_h * s.stride_w));
}

LayerParams shaped_params(const LayerSpec& s) {
  LayerParams p;
  const int taps = s.kernel_h * s.kernel_w;
  if (s.kind == LayerKind::kConv) {
    p.weight = Eigen::MatrixXd::Zero(s.out_channels, taps * s.in_channels);
  } else {
    p.weight = Eigen::MatrixXd::Zero(s.in_channels, taps * s.out_channels);
  }
  p.bias = Eigen::VectorXd::Zero(s.out_channels);
  if (s.prelu) p.slope = Eigen::VectorXd::Constant(s.out_channels, kPreluInitialSlope);
  return p;
}

void check_params(const ModelParams& params) {
  if (params.layers.size() != params.spec.layers.size()) {
    throw std::invalid_argument("model params do not match the layer table");
  }
}

Eigen::MatrixXd apply_layer(const LayerSpec& s, const LayerParams& p, const Eigen::MatrixXd& in,
                            int batch, Eigen::MatrixXd* col_out) {
  Eigen::MatrixXd pre;
  if (s.kind == LayerKind::kConv) {
    Eigen::MatrixXd col = im2col(in, {s.in_channels, s.in_h, s.in_w}, batch, s, s.out_h, s.out_w);
    pre.noalias() = p.weight * col;
    if (col_out) *col_out = std::move(col);
  } else {
    Eigen::MatrixXd col(p.weight.cols(), in.cols());
    col.noalias() = p.weight.transpose() * in;
    pre = col2im(col, {s.out_channels, s.out_h, s.out_w}, batch, s, s.in_h, s.in_w);
  }
  pre.colwise() += p.bias;
  return pre;
}

Eigen::MatrixXd activate(const LayerSpec& s, const LayerParams& p, const Eigen::MatrixXd& pre) {
  if (!s.prelu) return pre;
  Eigen::MatrixXd out = pre;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    for (Eigen::Index c = 0; c < out.rows(); ++c) {
      if (out(c, j) < 0.0) out(c, j) *= p.slope(c);
    }
  }
  return out;
}

nlohmann::json layer_json(const LayerSpec& s) {
  return {{"kind", s.kind == LayerKind::kConv ? "conv" : "transposed_conv"},
          {"in_channels", s.in_channels},
          {"out_channels", s.out_channels},
          {"kernel", {s.kernel_h, s.kernel_w}},
          {"stride", {s.stride_h, s.stride_w}},
          {"padding", {s.pad_h, s.pad_w}},
          {"output_padding", {s.out_pad_h, s.out_pad_w}},
          {"activation", s.prelu ? "prelu" : "linear"},
          {"input_shape", {s.in_channels, s.in_h, s.in_w}},
          {"output_shape", {s.out_channels, s.out_h, s.out_w}}};
}

}  // namespace

int conv_output_size(int in, int kernel, int stride, int pad) {
  const int span = in + 2 * pad - kernel;
  if (span < 0 || stride <= 0) return 0;
  return span / stride + 1;
}

int transposed_output_size(int in, int kernel, int stride, int pad, int out_pad) {
  return (in - 1) * stride - 2 * pad + kernel + out_pad;
}

void resolve_shapes(NetworkSpec& spec) {
  if (spec.rows <= 0 || spec.cols <= 0) throw std::invalid_argument("network input is empty");
  if (spec.layers.empty()) throw std::invalid_argument("network has no layers");
  int c = 1;
  int h = spec.rows;
  int w = spec.cols;
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    LayerSpec& s = spec.layers[i];
    if (s.in_channels != c) {
      throw std::invalid_argument("layer " + std::to_string(i) + ": channel mismatch");
    }
    if (s.kernel_h <= 0 || s.kernel_w <= 0 || s.stride_h <= 0 || s.stride_w <= 0 ||
        s.pad_h < 0 || s.pad_w < 0 || s.out_pad_h < 0 || s.out_pad_w < 0 ||
        s.out_channels <= 0) {
      throw std::invalid_argument("layer " + std::to_string(i) + ": bad hyperparameters");
    }
    s.in_h = h;
    s.in_w = w;
    if (s.kind == LayerKind::kConv) {
      s.out_h = conv_output_size(h, s.kernel_h, s.stride_h, s.pad_h);
      s.out_w = conv_output_size(w, s.kernel_w, s.stride_w, s.pad_w);
    } else {
      if (s.out_pad_h >= s.stride_h || s.out_pad_w >= s.stride_w) {
        throw std::invalid_argument("layer " + std::to_string(i) +
                                    ": output padding must be below the stride");
      }
      s.out_h = transposed_output_size(h, s.kernel_h, s.stride_h, s.pad_h, s.out_pad_h);
      s.out_w = transposed_output_size(w, s.kernel_w, s.stride_w, s.pad_w, s.out_pad_w);
    }
    if (s.out_h <= 0 || s.out_w <= 0) {
      throw std::invalid_argument("layer " + std::to_string(i) + ": input too small");
    }
    c = s.out_channels;
    h = s.out_h;
    w = s.out_w;
  }
  if (c != 1 || h != spec.rows || w != spec.cols) {
    throw std::invalid_argument("network output shape differs from its input shape");
  }
  if (spec.skip) {
    const auto [from, to] = *spec.skip;
    if (!(from < to && to + 1 < spec.layers.size())) {
      throw std::invalid_argument("skip connection indices out of order");
    }
    const LayerSpec& a = spec.layers[from];
    const LayerSpec& b = spec.layers[to];
    if (a.out_channels != b.out_channels || a.out_h != b.out_h || a.out_w != b.out_w) {
      throw std::invalid_argument("skip connection joins layers of different shapes");
    }
  }
}

NetworkSpec compensator_network(int rows, int cols) {
  if (rows < 15 || cols < 15) {
    throw std::invalid_argument("compensation network needs at least 15 x 15 inputs");
  }
  NetworkSpec spec;
  spec.rows = rows;
  spec.cols = cols;
  int h[4] = {rows, 0, 0, 0};
  int w[4] = {cols, 0, 0, 0};
  const int enc[3] = {128, 256, 512};
  int c = 1;
  for (int i = 0; i < 3; ++i) {
    spec.layers.push_back(conv_layer(c, enc[i]));
    c = enc[i];
    h[i + 1] = conv_output_size(h[i], 3, 2, 0);
    w[i + 1] = conv_output_size(w[i], 3, 2, 0);
  }
  spec.layers.push_back(transposed_layer(512, 256, h[3], w[3], h[2], w[2]));
  spec.layers.push_back(transposed_layer(256, 128, h[2], w[2], h[1], w[1]));
  spec.layers.push_back(transposed_layer(128, 128, h[1], w[1], h[0], w[0]));
  LayerSpec last;
  last.kind = LayerKind::kTransposedConv;
  last.in_channels = 128;
  last.out_channels = 1;
  last.stride_h = last.stride_w = 1;
  last.pad_h = last.pad_w = 1;
  last.prelu = false;
  spec.layers.push_back(last);
  spec.skip = SkipConnection{1, 3};
  resolve_shapes(spec);
  return spec;
}

NetworkSpec miniature_network(int rows, int cols, int channels) {
  if (rows < 7 || cols < 7) throw std::invalid_argument("miniature network needs 7 x 7 inputs");
  NetworkSpec spec;
  spec.rows = rows;
  spec.cols = cols;
  const int h1 = conv_output_size(rows, 3, 2, 0);
  const int w1 = conv_output_size(cols, 3, 2, 0);
  const int h2 = conv_output_size(h1, 3, 2, 0);
  const int w2 = conv_output_size(w1, 3, 2, 0);
  spec.layers.push_back(conv_layer(1, channels));
  spec.layers.push_back(conv_layer(channels, channels));
  spec.layers.push_back(transposed_layer(channels, channels, h2, w2, h1, w1));
  LayerSpec last = transposed_layer(channels, 1, h1, w1, rows, cols);
  last.prelu = false;
  spec.layers.push_back(last);
  spec.skip = SkipConnection{0, 2};
  resolve_shapes(spec);
  return spec;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const LayerParams& p : layers) {
    n += static_cast<std::size_t>(p.weight.size() + p.bias.size() + p.slope.size());
  }
  return n;
}

ModelParams init_params(const NetworkSpec& spec, std::uint64_t seed) {
  ModelParams params{spec, {}};
  resolve_shapes(params.spec);
  std::mt19937_64 rng(seed);
  for (const LayerSpec& s : params.spec.layers) {
    LayerParams p = shaped_params(s);
    const double slope = s.prelu ? kPreluInitialSlope : 1.0;
    const double std_dev = std::sqrt(2.0 / ((1.0 + slope * slope) * fan_in(s)));
    std::normal_distribution<double> dist(0.0, std_dev);
    for (Eigen::Index j = 0; j < p.weight.cols(); ++j) {
      for (Eigen::Index i = 0; i < p.weight.rows(); ++i) p.weight(i, j) = dist(rng);
    }
    params.layers.push_back(std::move(p));
  }
  return params;
}

ModelParams zero_params(const NetworkSpec& spec) {
  ModelParams params{spec, {}};
  resolve_shapes(params.spec);
  for (const LayerSpec& s : params.spec.layers) params.layers.push_back(shaped_params(s));
  return params;
}

ModelGradients zero_gradients(const ModelParams& params) {
  ModelGradients g;
  for (const LayerParams& p : params.layers) {
    g.push_back({Eigen::MatrixXd::Zero(p.weight.rows(), p.weight.cols()),
                 Eigen::VectorXd::Zero(p.bias.size()), Eigen::VectorXd::Zero(p.slope.size())});
  }
  return g;
}

Eigen::MatrixXd forward(const ModelParams& params, const Eigen::MatrixXd& x, int batch,
                        ForwardCache* cache) {
  check_params(params);
  const NetworkSpec& spec = params.spec;
  if (x.rows() != 1 || x.cols() != static_cast<Eigen::Index>(batch) * spec.rows * spec.cols) {
    throw std::invalid_argument("forward: input does not match the network shape");
  }
  const std::size_t n = spec.layers.size();
  std::vector<Eigen::MatrixXd> outputs(n);
  if (cache) {
    cache->batch = batch;
    cache->inputs.assign(n, {});
    cache->pre.assign(n, {});
    cache->cols.assign(n, {});
  }
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::MatrixXd in;
    if (i == 0) {
      in = x;
    } else if (spec.skip && i == spec.skip->to + 1) {
      in = outputs[i - 1] + outputs[spec.skip->from];
    } else {
      in = outputs[i - 1];
    }
    const LayerSpec& s = spec.layers[i];
    const LayerParams& p = params.layers[i];
    Eigen::MatrixXd pre = apply_layer(s, p, in, batch, cache ? &cache->cols[i] : nullptr);
    outputs[i] = activate(s, p, pre);
    if (cache) {
      cache->inputs[i] = std::move(in);
      cache->pre[i] = std::move(pre);
    }
    // Only the skip source and the immediate predecessor are needed later.
    if (i >= 2 && !(spec.skip && i - 2 == spec.skip->from)) outputs[i - 2].resize(0, 0);
  }
  if (cache) cache->outputs = outputs;
  return outputs.back();
}

void backward(const ModelParams& params, const ForwardCache& cache,
              const Eigen::MatrixXd& grad_output, ModelGradients& grads) {
  check_params(params);
  const NetworkSpec& spec = params.spec;
  const std::size_t n = spec.layers.size();
  const int batch = cache.batch;
  if (grads.size() != n) throw std::invalid_argument("backward: gradient buffer mismatch");
  std::vector<Eigen::MatrixXd> d_out(n);
  d_out[n - 1] = grad_output;
  for (std::size_t i = n; i-- > 0;) {
    const LayerSpec& s = spec.layers[i];
    const LayerParams& p = params.layers[i];
    LayerParams& g = grads[i];
    Eigen::MatrixXd d_pre = std::move(d_out[i]);
    if (s.prelu) {
      const Eigen::MatrixXd& pre = cache.pre[i];
      for (Eigen::Index j = 0; j < d_pre.cols(); ++j) {
        for (Eigen::Index c = 0; c < d_pre.rows(); ++c) {
          if (pre(c, j) < 0.0) {
            g.slope(c) += d_pre(c, j) * pre(c, j);
            d_pre(c, j) *= p.slope(c);
          }
        }
      }
    }
    g.bias += d_pre.rowwise().sum();
    Eigen::MatrixXd d_in;
    if (s.kind == LayerKind::kConv) {
      g.weight.noalias() += d_pre * cache.cols[i].transpose();
      if (i > 0) {
        Eigen::MatrixXd d_col(p.weight.cols(), d_pre.cols());
        d_col.noalias() = p.weight.transpose() * d_pre;
        d_in = col2im(d_col, {s.in_channels, s.in_h, s.in_w}, batch, s, s.out_h, s.out_w);
      }
    } else {
      const Eigen::MatrixXd d_col =
          im2col(d_pre, {s.out_channels, s.out_h, s.out_w}, batch, s, s.in_h, s.in_w);
      g.weight.noalias() += cache.inputs[i] * d_col.transpose();
      if (i > 0) {
        d_in.resize(p.weight.rows(), d_col.cols());
        d_in.noalias() = p.weight * d_col;
      }
    }
    if (i == 0) break;
    if (spec.skip && i == spec.skip->to + 1) {
      Eigen::MatrixXd& src = d_out[spec.skip->from];
      if (src.size() == 0) {
        src = d_in;
      } else {
        src += d_in;
      }
    }
    Eigen::MatrixXd& prev = d_out[i - 1];
    if (prev.size() == 0) {
      prev = std::move(d_in);
    } else {
      prev += d_in;
    }
  }
}

void store_sample(const PackedTensor& t, int b, Eigen::MatrixXd& x) {
  const Eigen::Index hw = t.rows() * t.cols();
  for (Eigen::Index y = 0; y < t.rows(); ++y) {
    for (Eigen::Index c = 0; c < t.cols(); ++c) x(0, b * hw + y * t.cols() + c) = t(y, c);
  }
}

PackedTensor load_sample(const Eigen::MatrixXd& y, int b, int rows, int cols) {
  PackedTensor t(rows, cols);
  const Eigen::Index hw = static_cast<Eigen::Index>(rows) * cols;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) t(r, c) = y(0, b * hw + r * cols + c);
  }
  return t;
}

PackedTensor cnn_forward(const PackedTensor& t, const ModelParams& params) {
  if (t.rows() != params.spec.rows || t.cols() != params.spec.cols) {
    throw std::invalid_argument("cnn_forward: tensor is " + std::to_string(t.rows()) + "x" +
                                std::to_string(t.cols()) + ", network expects " +
                                std::to_string(params.spec.rows) + "x" +
                                std::to_string(params.spec.cols));
  }
  Eigen::MatrixXd x(1, t.size());
  store_sample(t, 0, x);
  return load_sample(forward(params, x, 1), 0, params.spec.rows, params.spec.cols);
}

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params) {
  check_params(params);
  const NetworkSpec& spec = params.spec;
  if (spec.rows % 2 != 0) throw std::invalid_argument("checkpoint needs an even row count");
  BinaryWriter w(path);
  w.magic("SFSM");
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(spec.rows / 2));
  w.u32(static_cast<std::uint32_t>(spec.cols));
  w.u32(static_cast<std::uint32_t>(spec.layers.size()));
  for (const LayerSpec& s : spec.layers) {
    for (int v : {static_cast<int>(s.kind), s.in_channels, s.out_channels, s.kernel_h,
                  s.kernel_w, s.stride_h, s.stride_w, s.pad_h, s.pad_w, s.out_pad_h, s.out_pad_w,
                  static_cast<int>(s.prelu)}) {
      w.u32(static_cast<std::uint32_t>(v));
    }
  }
  w.u32(spec.skip ? 1 : 0);
  w.u32(spec.skip ? static_cast<std::uint32_t>(spec.skip->from) : 0);
  w.u32(spec.skip ? static_cast<std::uint32_t>(spec.skip->to) : 0);
  for (const LayerParams& p : params.layers) {
    w.f64s({p.weight.data(), static_cast<std::size_t>(p.weight.size())});
    w.f64s({p.bias.data(), static_cast<std::size_t>(p.bias.size())});
    w.f64s({p.slope.data(), static_cast<std::size_t>(p.slope.size())});
  }
  w.close();

  nlohmann::json side = {{"format", "SFSM"},
                         {"version", kCheckpointVersion},
                         {"L", spec.rows / 2},
                         {"K", spec.cols},
                         {"parameters", params.parameter_count()},
                         {"layers", nlohmann::json::array()}};
  for (const LayerSpec& s : spec.layers) side["layers"].push_back(layer_json(s));
  if (spec.skip) side["skip"] = {{"from", spec.skip->from}, {"to", spec.skip->to}};
  std::filesystem::path json_path = path;
  json_path += ".json";
  std::ofstream out(json_path);
  out << side.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + json_path.string());
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  BinaryReader r(path);
  r.expect_magic("SFSM");
  if (r.u32() != kCheckpointVersion) throw FormatError(path.string() + ": unsupported version");
  NetworkSpec spec;
  spec.rows = static_cast<int>(2 * r.u32());
  spec.cols = static_cast<int>(r.u32());
  const std::uint32_t n = r.u32();
  if (n == 0 || n > 64) throw FormatError(path.string() + ": implausible layer count");
  for (std::uint32_t i = 0; i < n; ++i) {
    LayerSpec s;
    const std::uint32_t kind = r.u32();
    if (kind > 1) throw FormatError(path.string() + ": unknown layer kind");
    s.kind = static_cast<LayerKind>(kind);
    s.in_channels = static_cast<int>(r.u32());
    s.out_channels = static_cast<int>(r.u32());
    s.kernel_h = static_cast<int>(r.u32());
    s.kernel_w = static_cast<int>(r.u32());
    s.stride_h = static_cast<int>(r.u32());
    s.stride_w = static_cast<int>(r.u32());
    s.pad_h = static_cast<int>(r.u32());
    s.pad_w = static_cast<int>(r.u32());
    s.out_pad_h = static_cast<int>(r.u32());
    s.out_pad_w = static_cast<int>(r.u32());
    s.prelu = r.u32() != 0;
    spec.layers.push_back(s);
  }
  const bool has_skip = r.u32() != 0;
  const std::uint32_t from = r.u32();
  const std::uint32_t to = r.u32();
  if (has_skip) spec.skip = SkipConnection{from, to};
  try {
    resolve_shapes(spec);
  } catch (const std::invalid_argument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  ModelParams params = zero_params(spec);
  for (LayerParams& p : params.layers) {
    r.f64s({p.weight.data(), static_cast<std::size_t>(p.weight.size())});
    r.f64s({p.bias.data(), static_cast<std::size_t>(p.bias.size())});
    r.f64s({p.slope.data(), static_cast<std::size_t>(p.slope.size())});
  }
  if (!r.at_end()) throw FormatError(path.string() + ": trailing bytes");
  return params;
}

}  // namespace sfs
