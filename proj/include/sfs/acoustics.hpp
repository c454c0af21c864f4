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

#ifndef SFS_ACOUSTICS_HPP_
#define SFS_ACOUSTICS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "sfs/bessel.hpp"
#include "sfs/types.hpp"

namespace sfs {

inline constexpr double kDefaultSpeedOfSound = 343.0;

class FrequencyGrid {
 public:
  FrequencyGrid() = default;
  // Throws std::invalid_argument unless hz is strictly increasing and positive.
  FrequencyGrid(std::vector<double> hz, double speed_of_sound);

  // f_k = start + k * step, k = 0..count-1.
  static FrequencyGrid uniform(double start_hz, double step_hz, std::size_t count,
                               double speed_of_sound = kDefaultSpeedOfSound);

  std::size_t size() const { return hz_.size(); }
  double hz(std::size_t k) const { return hz_[k]; }
  double omega(std::size_t k) const { return kTwoPi * hz_[k]; }
  double c() const { return c_; }
  const std::vector<double>& hz() const { return hz_; }

  // Index of the grid frequency closest to `hz` (ties go to the lower one).
  std::size_t nearest(double hz) const;

 private:
  std::vector<double> hz_;
  double c_ = kDefaultSpeedOfSound;
};

// Omnidirectional point source. An empty spectrum means A(w_k) = 1.
struct Source {
  Point2 position;
  std::vector<Complex> spectrum;

  double rho() const { return position.norm(); }
  double theta() const { return position.angle(); }
  Complex amplitude(std::size_t k) const { return spectrum.empty() ? Complex{1.0} : spectrum[k]; }
};

// 2D free-field Green's function (j/4) H^(2)_0((w/c)|r - r_src|).
// Throws SingularityError when the points coincide.
Complex green2d(Point2 r, Point2 r_src, double omega, double c);

// exp(j (w/c) <r, [cos theta, sin theta]>).
Complex plane_wave_field(Point2 r, double theta, double omega, double c);

// ceil(e * (w/c) * rho / 2).
int truncation_order(double omega, double rho, double c);

// Truncated Herglotz density of a point source,
//   phi(theta) = A sum_{|m|<=M} j^-m (j/4) H^(2)_m((w/c) rho_z) e^{jm(theta - theta_z)}.
// The modal coefficients are computed once so the density can be sampled at
// many directions cheaply.
class HerglotzDensity {
 public:
  HerglotzDensity(Point2 source, Complex amplitude, int order, double omega, double c);

  Complex operator()(double theta) const;
  int order() const { return order_; }

 private:
  int order_;
  double theta_z_;
  std::vector<Complex> coeff_;  // index m + M
};

Complex herglotz_point_source(double theta, double omega, Point2 source, Complex amplitude,
                              int order, double c);

// (1/2pi) \int e^{j(w/c)<r,k(theta)>} phi(theta) dtheta by the composite
// trapezoid rule on `nodes` equispaced directions.
Complex plane_wave_expansion(Point2 r, const HerglotzDensity& phi, double omega, double c,
                             std::size_t nodes);

// I x L matrix of g(points_i | speakers_l).
ComplexMatrix transfer_matrix(std::span<const Point2> points, std::span<const Point2> speakers,
                              double omega, double c);

// Field of a unit monopole at `source` sampled at `points`.
ComplexVector monopole_field(std::span<const Point2> points, Point2 source, double omega,
                             double c);

}  // namespace sfs

#endif  // SFS_ACOUSTICS_HPP_
