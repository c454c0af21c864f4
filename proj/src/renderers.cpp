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

#include "sfs/renderers.hpp"

#include <cmath>
#include <limits>

namespace sfs {
namespace {

void require_speakers(const ArrayGeometry& array) {
  if (array.active_count() == 0) throw std::invalid_argument("array has no active loudspeakers");
}

}  // namespace

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::kMr:
      return "mr";
    case Provenance::kPm:
      return "pm";
    case Provenance::kCnn:
      return "cnn";
  }
  return "?";
}

void DrivingSignals::validate(std::size_t active_count, std::size_t frequencies) const {
  if (static_cast<std::size_t>(values.rows()) != active_count ||
      static_cast<std::size_t>(values.cols()) != frequencies) {
    throw std::invalid_argument("driving signals: shape does not match the array/frequency grid");
  }
  if (!values.allFinite()) throw std::invalid_argument("driving signals: non-finite entry");
}

ComplexMatrix regularized_least_squares(const ComplexMatrix& g, const ComplexMatrix& b,
                                        double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("regularization must be >= 0");
  ComplexMatrix normal = g.adjoint() * g;
  normal.diagonal().array() += lambda;
  Eigen::LLT<ComplexMatrix> llt(normal);
  if (llt.info() != Eigen::Success || llt.rcond() < 8 * std::numeric_limits<double>::epsilon()) {
    throw SolverError("regularized least squares: normal matrix is singular");
  }
  return llt.solve(g.adjoint() * b);
}

FieldGrid synthesize(const ArrayGeometry& array, const ComplexVector& driving,
                     const PointSet& points, double omega, double c) {
  if (static_cast<std::size_t>(driving.size()) != array.active_count()) {
    throw std::invalid_argument("synthesize: driving length must equal the active count");
  }
  const std::vector<Point2> speakers = array.active_positions();
  return synthesize(transfer_matrix(points.points, speakers, omega, c), driving);
}

FieldGrid synthesize(const ComplexMatrix& transfer, const ComplexVector& driving) {
  if (transfer.cols() != driving.size()) {
    throw std::invalid_argument("synthesize: driving length must equal the transfer columns");
  }
  return {transfer * driving};
}

MrCircularRenderer::MrCircularRenderer(const ArrayGeometry& array, double omega,
                                       double listening_radius, double c)
    : omega_(omega), c_(c), array_radius_(array.radius()) {
  if (array.family() != ArrayFamily::kCircular) {
    throw std::invalid_argument("MrCircularRenderer needs a circular array");
  }
  require_speakers(array);
  order_ = truncation_order(omega, listening_radius, c);
  if (order_ > kMaxBesselOrder) throw std::invalid_argument("MR: truncation order too large");
  const auto n_dirs = static_cast<std::size_t>(2 * order_ + 1);
  directions_.resize(n_dirs);
  for (std::size_t n = 0; n < n_dirs; ++n) {
    directions_[n] = kTwoPi * static_cast<double>(n) / static_cast<double>(n_dirs);
  }

  const std::vector<Polar> polar = array.active_polar();
  const auto n_active = static_cast<double>(polar.size());
  // j^m for m >= 0 cycles 1, j, -1, -j.
  static constexpr Complex kJPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  filters_.resize(static_cast<Eigen::Index>(polar.size()), static_cast<Eigen::Index>(n_dirs));
  for (std::size_t l = 0; l < polar.size(); ++l) {
    const std::vector<Complex> h = hankel2_orders(order_, omega / c * polar[l].rho);
    // w_m = j^m / H_m, with H_{-m} = (-1)^m H_m.
    std::vector<Complex> w(2 * static_cast<std::size_t>(order_) + 1);
    for (int m = -order_; m <= order_; ++m) {
      const int am = std::abs(m);
      const Complex hm = (m < 0 && am % 2 == 1) ? -h[am] : h[am];
      w[static_cast<std::size_t>(m + order_)] = kJPow[((m % 4) + 4) % 4] / hm;
    }
    for (std::size_t n = 0; n < n_dirs; ++n) {
      const Complex step = std::polar(1.0, polar[l].theta - directions_[n]);
      Complex rot = std::pow(std::conj(step), order_);
      Complex sum = 0.0;
      for (const Complex& wm : w) {
        sum += wm * rot;
        rot *= step;
      }
      filters_(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(n)) =
          4.0 / (kJ * n_active) * sum;
    }
  }
}

ComplexVector MrCircularRenderer::driving(Point2 source, Complex amplitude) const {
  if (!(source.norm() > array_radius_)) {
    throw std::invalid_argument("MR circular: source must lie outside the array");
  }
  const HerglotzDensity phi(source, amplitude, order_, omega_, c_);
  ComplexVector density(static_cast<Eigen::Index>(directions_.size()));
  for (std::size_t n = 0; n < directions_.size(); ++n) {
    density(static_cast<Eigen::Index>(n)) = phi(directions_[n]);
  }
  return filters_ * density / static_cast<double>(directions_.size());
}

ComplexVector mr_circular_driving(const ArrayGeometry& array, Point2 source, Complex amplitude,
                                  double omega, double listening_radius, double c) {
  return MrCircularRenderer(array, omega, listening_radius, c).driving(source, amplitude);
}

PlaneWaveWindow linear_window(const ArrayGeometry& array) {
  if (array.family() != ArrayFamily::kLinear) {
    throw std::invalid_argument("linear_window needs a linear array");
  }
  return {std::atan2(-array.y0(), array.x0()), std::atan2(array.y0(), array.x0())};
}

ComplexVector mr_linear_filters(const ArrayGeometry& array, const PointSet& control,
                                double theta, double omega, double lambda, double c) {
  if (array.family() != ArrayFamily::kLinear) {
    throw std::invalid_argument("mr_linear_filters needs a linear array");
  }
  require_speakers(array);
  if (control.size() == 0) throw std::invalid_argument("mr_linear_filters: no control points");
  const std::vector<Point2> speakers = array.active_positions();
  const ComplexMatrix g = transfer_matrix(control.points, speakers, omega, c);
  ComplexMatrix target(static_cast<Eigen::Index>(control.size()), 1);
  for (std::size_t i = 0; i < control.size(); ++i) {
    target(static_cast<Eigen::Index>(i), 0) = plane_wave_field(control.points[i], theta, omega, c);
  }
  return regularized_least_squares(g, target, lambda).col(0);
}

MrLinearRenderer::MrLinearRenderer(const ArrayGeometry& array, const PointSet& control,
                                   double omega, double lambda, double listening_radius,
                                   double c, std::size_t plane_waves)
    : omega_(omega), c_(c), window_(linear_window(array)) {
  require_speakers(array);
  if (control.size() == 0) throw std::invalid_argument("MR linear: no control points");
  order_ = truncation_order(omega, listening_radius, c);
  if (order_ > kMaxBesselOrder) throw std::invalid_argument("MR: truncation order too large");
  const std::size_t n_dirs =
      plane_waves == 0 ? static_cast<std::size_t>(2 * order_ + 1) : plane_waves;
  directions_.resize(n_dirs);
  for (std::size_t n = 0; n < n_dirs; ++n) directions_[n] = window_.sample(n, n_dirs);

  const std::vector<Point2> speakers = array.active_positions();
  const ComplexMatrix g = transfer_matrix(control.points, speakers, omega, c);
  ComplexMatrix targets(static_cast<Eigen::Index>(control.size()),
                        static_cast<Eigen::Index>(n_dirs));
  for (std::size_t n = 0; n < n_dirs; ++n) {
    for (std::size_t i = 0; i < control.size(); ++i) {
      targets(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n)) =
          plane_wave_field(control.points[i], directions_[n], omega, c);
    }
  }
  filters_ = regularized_least_squares(g, targets, lambda);
}

ComplexVector MrLinearRenderer::driving(Point2 source, Complex amplitude) const {
  const HerglotzDensity phi(source, amplitude, order_, omega_, c_);
  ComplexVector density(static_cast<Eigen::Index>(directions_.size()));
  for (std::size_t n = 0; n < directions_.size(); ++n) {
    density(static_cast<Eigen::Index>(n)) = phi(directions_[n]);
  }
  const double weight = window_.width() / (kTwoPi * static_cast<double>(directions_.size()));
  return weight * (filters_ * density);
}

ComplexVector mr_linear_driving(const ArrayGeometry& array, Point2 source, Complex amplitude,
                                const PointSet& control, double omega, double lambda,
                                double listening_radius, double c) {
  return MrLinearRenderer(array, control, omega, lambda, listening_radius, c)
      .driving(source, amplitude);
}

PmOperator::PmOperator(ComplexMatrix transfer, double lambda, double omega)
    : transfer_(std::move(transfer)), lambda_(lambda), omega_(omega) {
  if (transfer_.rows() == 0 || transfer_.cols() == 0) {
    throw std::invalid_argument("PM operator: empty transfer matrix");
  }
  const ComplexMatrix identity =
      ComplexMatrix::Identity(transfer_.rows(), transfer_.rows());
  matrix_ = regularized_least_squares(transfer_, identity, lambda_);
}

ComplexVector PmOperator::driving(const ComplexVector& control_pressure) const {
  if (control_pressure.size() != transfer_.rows()) {
    throw std::invalid_argument("pm_driving: pressure length must equal the control count");
  }
  return matrix_ * control_pressure;
}

PmOperator pm_operator(const ArrayGeometry& array, const PointSet& control, double omega,
                       double lambda, double c) {
  require_speakers(array);
  if (control.size() == 0) throw std::invalid_argument("pm_operator: no control points");
  const std::vector<Point2> speakers = array.active_positions();
  return PmOperator(transfer_matrix(control.points, speakers, omega, c), lambda, omega);
}

ComplexVector pm_driving(const PmOperator& op, const ComplexVector& control_pressure) {
  return op.driving(control_pressure);
}

MrBank::MrBank(const ArrayGeometry& array, const FrequencyGrid& freqs, double listening_radius,
               const PointSet& control, double lambda)
    : freqs_(freqs), active_count_(array.active_count()) {
  if (freqs.size() == 0) throw std::invalid_argument("MrBank: empty frequency grid");
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    if (array.family() == ArrayFamily::kCircular) {
      circular_.emplace_back(array, freqs.omega(k), listening_radius, freqs.c());
    } else {
      linear_.emplace_back(array, control, freqs.omega(k), lambda, listening_radius, freqs.c());
    }
  }
}

DrivingSignals MrBank::driving(const Source& source) const {
  DrivingSignals d;
  d.provenance = Provenance::kMr;
  d.values.resize(static_cast<Eigen::Index>(active_count_),
                  static_cast<Eigen::Index>(freqs_.size()));
  for (std::size_t k = 0; k < freqs_.size(); ++k) {
    const Complex a = source.amplitude(k);
    d.values.col(static_cast<Eigen::Index>(k)) = circular_.empty()
                                                     ? linear_[k].driving(source.position, a)
                                                     : circular_[k].driving(source.position, a);
  }
  return d;
}

PmBank::PmBank(const ArrayGeometry& array, const PointSet& control, const FrequencyGrid& freqs,
               double lambda)
    : freqs_(freqs), control_(control.points) {
  if (freqs.size() == 0) throw std::invalid_argument("PmBank: empty frequency grid");
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    operators_.push_back(pm_operator(array, control, freqs.omega(k), lambda, freqs.c()));
  }
}

DrivingSignals PmBank::driving(const Source& source) const {
  DrivingSignals d;
  d.provenance = Provenance::kPm;
  d.values.resize(static_cast<Eigen::Index>(operators_.front().speaker_count()),
                  static_cast<Eigen::Index>(freqs_.size()));
  for (std::size_t k = 0; k < freqs_.size(); ++k) {
    const ComplexVector target =
        source.amplitude(k) * monopole_field(control_, source.position, freqs_.omega(k), freqs_.c());
    d.values.col(static_cast<Eigen::Index>(k)) = operators_[k].driving(target);
  }
  return d;
}

}  // namespace sfs
