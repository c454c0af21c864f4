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

#include "sfs/acoustics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sfs {

FrequencyGrid::FrequencyGrid(std::vector<double> hz, double speed_of_sound)
    : hz_(std::move(hz)), c_(speed_of_sound) {
  if (!(c_ > 0.0)) throw std::invalid_argument("FrequencyGrid: speed of sound must be > 0");
  if (hz_.empty()) throw std::invalid_argument("FrequencyGrid: no frequencies");
  for (std::size_t k = 0; k < hz_.size(); ++k) {
    if (!(hz_[k] > 0.0) || (k > 0 && !(hz_[k] > hz_[k - 1]))) {
      throw std::invalid_argument("FrequencyGrid: frequencies must be positive and increasing");
    }
  }
}

FrequencyGrid FrequencyGrid::uniform(double start_hz, double step_hz, std::size_t count,
                                     double speed_of_sound) {
  std::vector<double> hz(count);
  for (std::size_t k = 0; k < count; ++k) hz[k] = start_hz + static_cast<double>(k) * step_hz;
  return FrequencyGrid(std::move(hz), speed_of_sound);
}

std::size_t FrequencyGrid::nearest(double hz) const {
  std::size_t best = 0;
  for (std::size_t k = 1; k < hz_.size(); ++k) {
    if (std::abs(hz_[k] - hz) < std::abs(hz_[best] - hz)) best = k;
  }
  return best;
}

Complex green2d(Point2 r, Point2 r_src, double omega, double c) {
  const double d = distance(r, r_src);
  if (!(d > 0.0)) throw SingularityError("green2d: field point coincides with the source");
  return 0.25 * kJ * hankel2_0(omega / c * d);
}

Complex plane_wave_field(Point2 r, double theta, double omega, double c) {
  const double k = omega / c;
  return std::polar(1.0, k * (r.x * std::cos(theta) + r.y * std::sin(theta)));
}

int truncation_order(double omega, double rho, double c) {
  return static_cast<int>(std::ceil(std::numbers::e * (omega / c) * rho / 2.0));
}

HerglotzDensity::HerglotzDensity(Point2 source, Complex amplitude, int order, double omega,
                                 double c)
    : order_(order), theta_z_(source.angle()) {
  if (order < 0) throw std::invalid_argument("HerglotzDensity: order must be >= 0");
  const double x = omega / c * source.norm();
  const std::vector<Complex> h = hankel2_orders(order, x);
  coeff_.resize(2 * static_cast<std::size_t>(order) + 1);
  // j^-m for m >= 0 cycles 1, -j, -1, j.
  static constexpr Complex kJPowNeg[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  for (int m = -order; m <= order; ++m) {
    const int am = std::abs(m);
    const Complex hm = (m < 0 && am % 2 == 1) ? -h[am] : h[am];
    const Complex jpow = kJPowNeg[((m % 4) + 4) % 4];
    coeff_[static_cast<std::size_t>(m + order)] = amplitude * jpow * 0.25 * kJ * hm;
  }
}

Complex HerglotzDensity::operator()(double theta) const {
  const Complex step = std::polar(1.0, theta - theta_z_);
  Complex rot = std::pow(std::conj(step), order_);
  Complex sum = 0.0;
  for (const Complex& a : coeff_) {
    sum += a * rot;
    rot *= step;
  }
  return sum;
}

Complex herglotz_point_source(double theta, double omega, Point2 source, Complex amplitude,
                              int order, double c) {
  return HerglotzDensity(source, amplitude, order, omega, c)(theta);
}

Complex plane_wave_expansion(Point2 r, const HerglotzDensity& phi, double omega, double c,
                             std::size_t nodes) {
  if (nodes == 0) throw std::invalid_argument("plane_wave_expansion: nodes must be > 0");
  Complex sum = 0.0;
  for (std::size_t n = 0; n < nodes; ++n) {
    const double theta = kTwoPi * static_cast<double>(n) / static_cast<double>(nodes);
    sum += plane_wave_field(r, theta, omega, c) * phi(theta);
  }
  return sum / static_cast<double>(nodes);
}

ComplexMatrix transfer_matrix(std::span<const Point2> points, std::span<const Point2> speakers,
                              double omega, double c) {
  ComplexMatrix g(static_cast<Eigen::Index>(points.size()),
                  static_cast<Eigen::Index>(speakers.size()));
  for (std::size_t l = 0; l < speakers.size(); ++l) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) =
          green2d(points[i], speakers[l], omega, c);
    }
  }
  return g;
}

ComplexVector monopole_field(std::span<const Point2> points, Point2 source, double omega,
                             double c) {
  ComplexVector p(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    p(static_cast<Eigen::Index>(i)) = green2d(points[i], source, omega, c);
  }
  return p;
}

}  // namespace sfs
