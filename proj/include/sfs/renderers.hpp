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

#ifndef SFS_RENDERERS_HPP_
#define SFS_RENDERERS_HPP_

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfs/acoustics.hpp"
#include "sfs/geometry.hpp"
#include "sfs/types.hpp"

namespace sfs {

enum class Provenance { kMr, kPm, kCnn };

const char* to_string(Provenance p);

// Active loudspeakers x frequencies.
struct DrivingSignals {
  ComplexMatrix values;
  Provenance provenance = Provenance::kMr;

  // Throws std::invalid_argument on non-finite entries or a shape that does
  // not match (active_count, K).
  void validate(std::size_t active_count, std::size_t frequencies) const;
};

struct FieldGrid {
  ComplexVector pressure;

  std::size_t size() const { return static_cast<std::size_t>(pressure.size()); }
};

class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// Solves (G^H G + lambda I) X = G^H B with a Cholesky factorisation.
ComplexMatrix regularized_least_squares(const ComplexMatrix& g, const ComplexMatrix& b,
                                        double lambda);

// p(r_a) = sum_l d_l g(r_a | r_l) over the active loudspeakers.
FieldGrid synthesize(const ArrayGeometry& array, const ComplexVector& driving,
                     const PointSet& points, double omega, double c);
// Same with the transfer matrix already assembled.
FieldGrid synthesize(const ComplexMatrix& transfer, const ComplexVector& driving);

// Model-based rendering on a (possibly decimated) circular array. The filter
// bank h_l(theta_n) is independent of the source, so it is built once per
// frequency:
//   h_l(theta_n) = 4/(j L_active) sum_{|m|<=M} j^m e^{jm(theta_l - theta_n)} / H^(2)_m(k rho_l)
//   d_l = (1/N) sum_n phi(theta_n) h_l(theta_n)
// with M = truncation_order(w, listening_radius, c) and N = 2M + 1.
class MrCircularRenderer {
 public:
  MrCircularRenderer(const ArrayGeometry& array, double omega, double listening_radius,
                     double c);

  ComplexVector driving(Point2 source, Complex amplitude) const;

  int order() const { return order_; }
  const std::vector<double>& directions() const { return directions_; }
  // L_active x N.
  const ComplexMatrix& filters() const { return filters_; }

 private:
  double omega_;
  double c_;
  double array_radius_;
  int order_;
  std::vector<double> directions_;
  ComplexMatrix filters_;
};

ComplexVector mr_circular_driving(const ArrayGeometry& array, Point2 source, Complex amplitude,
                                  double omega, double listening_radius, double c);

// Directions a linear array at x = x0 can reproduce:
// [atan2(-y0, x0), atan2(y0, x0)].
struct PlaneWaveWindow {
  double theta_min = 0.0;
  double theta_max = 0.0;

  double width() const { return theta_max - theta_min; }
  // Midpoint-rule sample n of `count`.
  double sample(std::size_t n, std::size_t count) const {
    return theta_min + (static_cast<double>(n) + 0.5) * width() / static_cast<double>(count);
  }
};

PlaneWaveWindow linear_window(const ArrayGeometry& array);

// Least-squares filters reproducing the plane wave `theta` at the control
// points with the active loudspeakers.
ComplexVector mr_linear_filters(const ArrayGeometry& array, const PointSet& control,
                                double theta, double omega, double lambda, double c);

// Model-based rendering on a (possibly decimated) linear array:
//   d_l = width/(2 pi N) sum_n phi(theta_n) h_l(theta_n).
class MrLinearRenderer {
 public:
  // plane_waves = 0 selects N = 2M + 1.
  MrLinearRenderer(const ArrayGeometry& array, const PointSet& control, double omega,
                   double lambda, double listening_radius, double c,
                   std::size_t plane_waves = 0);

  ComplexVector driving(Point2 source, Complex amplitude) const;

  int order() const { return order_; }
  const PlaneWaveWindow& window() const { return window_; }
  const std::vector<double>& directions() const { return directions_; }
  const ComplexMatrix& filters() const { return filters_; }

 private:
  double omega_;
  double c_;
  int order_;
  PlaneWaveWindow window_;
  std::vector<double> directions_;
  ComplexMatrix filters_;
};

ComplexVector mr_linear_driving(const ArrayGeometry& array, Point2 source, Complex amplitude,
                                const PointSet& control, double omega, double lambda,
                                double listening_radius, double c);

// Pressure matching: C = (G^H G + lambda I)^-1 G^H, d = C p_cp. C does not
// depend on the target field, so one operator serves every source at a given
// frequency at O(I L) per source.
class PmOperator {
 public:
  PmOperator(ComplexMatrix transfer, double lambda, double omega);

  const ComplexMatrix& transfer() const { return transfer_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  double lambda() const { return lambda_; }
  double omega() const { return omega_; }
  std::size_t control_count() const { return static_cast<std::size_t>(transfer_.rows()); }
  std::size_t speaker_count() const { return static_cast<std::size_t>(transfer_.cols()); }

  ComplexVector driving(const ComplexVector& control_pressure) const;

 private:
  ComplexMatrix transfer_;
  ComplexMatrix matrix_;
  double lambda_;
  double omega_;
};

PmOperator pm_operator(const ArrayGeometry& array, const PointSet& control, double omega,
                       double lambda, double c);

ComplexVector pm_driving(const PmOperator& op, const ComplexVector& control_pressure);

// MR rendering over a whole frequency grid. Filter banks are built once per
// frequency and reused for every source. Circular arrays ignore `control`
// and `lambda`.
class MrBank {
 public:
  MrBank(const ArrayGeometry& array, const FrequencyGrid& freqs, double listening_radius,
         const PointSet& control, double lambda);

  // L_active x K driving signals for `source`.
  DrivingSignals driving(const Source& source) const;

 private:
  FrequencyGrid freqs_;
  std::size_t active_count_;
  std::vector<MrCircularRenderer> circular_;
  std::vector<MrLinearRenderer> linear_;
};

// Pressure matching over a frequency grid with p_cp = A(w) g(r_i | r_s).
class PmBank {
 public:
  PmBank(const ArrayGeometry& array, const PointSet& control, const FrequencyGrid& freqs,
         double lambda);

  DrivingSignals driving(const Source& source) const;
  const PmOperator& at(std::size_t k) const { return operators_[k]; }

 private:
  FrequencyGrid freqs_;
  std::vector<Point2> control_;
  std::vector<PmOperator> operators_;
};

}  // namespace sfs

#endif  // SFS_RENDERERS_HPP_
