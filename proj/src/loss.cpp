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

#include "sfs/loss.hpp"

#include <cmath>

namespace sfs {
namespace {

void check_shapes(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("loss: prediction and ground truth differ in shape");
  }
  if (a.size() == 0) throw std::invalid_argument("loss: empty pressure matrix");
}

}  // namespace

void LossWeights::validate() const {
  if (!(lambda_abs >= 0.0) || !(lambda_phase >= 0.0) || !std::isfinite(lambda_abs) ||
      !std::isfinite(lambda_phase)) {
    throw std::invalid_argument("loss weights must be finite and >= 0");
  }
}

double wrap_phase(double angle) {
  double r = std::remainder(angle, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

ComplexMatrix predict_control_pressure(const ComplexMatrix& d, std::span<const ComplexMatrix> g) {
  if (static_cast<std::size_t>(d.cols()) != g.size()) {
    throw std::invalid_argument("predict_control_pressure: one transfer matrix per frequency");
  }
  if (g.empty()) return {};
  const Eigen::Index rows = g[0].rows();
  ComplexMatrix p(rows, d.cols());
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g[k].cols() != d.rows() || g[k].rows() != rows) {
      throw std::invalid_argument("predict_control_pressure: transfer matrix shape mismatch");
    }
    p.col(static_cast<Eigen::Index>(k)).noalias() = g[k] * d.col(static_cast<Eigen::Index>(k));
  }
  return p;
}

double pressure_loss(const ComplexMatrix& pred, const ComplexMatrix& gt, const LossWeights& w) {
  check_shapes(pred, gt);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < pred.cols(); ++j) {
    for (Eigen::Index i = 0; i < pred.rows(); ++i) {
      const Complex p = pred(i, j);
      const Complex t = gt(i, j);
      sum += w.lambda_abs * std::abs(std::abs(t) - std::abs(p)) +
             w.lambda_phase * std::abs(wrap_phase(std::arg(t) - std::arg(p)));
    }
  }
  return sum / static_cast<double>(pred.size());
}

double pressure_loss_gradient(const ComplexMatrix& pred, const ComplexMatrix& gt,
                              const LossWeights& w, ComplexMatrix& grad) {
  check_shapes(pred, gt);
  grad.resize(pred.rows(), pred.cols());
  const double scale = 1.0 / static_cast<double>(pred.size());
  double sum = 0.0;
  for (Eigen::Index j = 0; j < pred.cols(); ++j) {
    for (Eigen::Index i = 0; i < pred.rows(); ++i) {
      const Complex p = pred(i, j);
      const Complex t = gt(i, j);
      const double mag_gap = std::abs(p) - std::abs(t);
      const double phase_gap = wrap_phase(std::arg(t) - std::arg(p));
      sum += w.lambda_abs * std::abs(mag_gap) + w.lambda_phase * std::abs(phase_gap);
      const double m = std::abs(p);
      if (m == 0.0) {
        grad(i, j) = 0.0;
        continue;
      }
      // d|p| = Re(conj(p/|p|) dp), d arg p = Re(conj(j p/|p|^2) dp).
      const double sign_mag = (mag_gap > 0.0) - (mag_gap < 0.0);
      const double sign_phase = (phase_gap > 0.0) - (phase_gap < 0.0);
      grad(i, j) = scale * (w.lambda_abs * sign_mag * p / m -
                            w.lambda_phase * sign_phase * kJ * p / (m * m));
    }
  }
  return sum * scale;
}

}  // namespace sfs
