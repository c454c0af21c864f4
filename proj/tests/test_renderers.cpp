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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sfs/acoustics.hpp"
#include "sfs/bessel.hpp"
#include "sfs/evaluation.hpp"
#include "sfs/renderers.hpp"
#include "test_util.hpp"

namespace sfs {
namespace {

constexpr double kC = 343.0;

double field_nre(const ArrayGeometry& array, const ComplexVector& d, const PointSet& grid,
                 Point2 z, double omega) {
  return nre(synthesize(array, d, grid, omega, kC).pressure,
             monopole_field(grid.points, z, omega, kC));
}

TEST(Synthesize, SingleLoudspeakerIsGreenFunction) {
  const ArrayGeometry a = make_circular_array(1, 1.0);
  const PointSet pts{{{0.1, 0.0}, {0.0, 0.5}, {-0.3, -0.3}}, PointRole::kListening};
  const FieldGrid f = synthesize(a, ComplexVector::Ones(1), pts, 2000.0, kC);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_EQ(f.pressure(static_cast<Eigen::Index>(i)),
              green2d(pts.points[i], {1.0, 0.0}, 2000.0, kC));
  }
}

TEST(Synthesize, ZeroDrivingAndSuperposition) {
  const ArrayGeometry two = make_linear_array(2, 0.5, 1.0);
  const PointSet pts{{{0.0, 0.0}, {-0.5, 0.2}}, PointRole::kListening};
  EXPECT_EQ(synthesize(two, ComplexVector::Zero(2), pts, 900.0, kC).pressure.norm(), 0.0);
  const ComplexVector both = synthesize(two, ComplexVector::Ones(2), pts, 900.0, kC).pressure;
  const ComplexVector e0 = synthesize(two, ComplexVector::Unit(2, 0), pts, 900.0, kC).pressure;
  const ComplexVector e1 = synthesize(two, ComplexVector::Unit(2, 1), pts, 900.0, kC).pressure;
  EXPECT_LE((both - e0 - e1).norm(), 1e-15 * both.norm());
}

TEST(Synthesize, Errors) {
  const ArrayGeometry a = make_circular_array(4, 1.0);
  const PointSet on{{{1.0, 0.0}}, PointRole::kListening};
  EXPECT_THROW(synthesize(a, ComplexVector::Ones(4), on, 900.0, kC), SingularityError);
  EXPECT_THROW(synthesize(a, ComplexVector::Ones(3), on, 900.0, kC), std::invalid_argument);
}

TEST(MrCircular, FullArrayAccurateInListeningDisk) {
  const double omega = kTwoPi * 500;
  const ArrayGeometry full = make_circular_array(64, 1.0);
  const PointSet grid = sample_listening_grid({Disk{{0, 0}, 0.8}, 0.02});
  const Point2 z{2.0, 0.0};
  const double e64 = field_nre(full, mr_circular_driving(full, z, 1.0, omega, 0.8, kC), grid, z, omega);
  EXPECT_LE(e64, -15.0);
  const ArrayGeometry half = decimate_array(full, 32, 7);
  const double e32 = field_nre(half, mr_circular_driving(half, z, 1.0, omega, 0.8, kC), grid, z, omega);
  EXPECT_GT(e32, e64);
}

TEST(MrCircular, SingleLoudspeakerMatchesDoubleLoop) {
  const ArrayGeometry one = make_circular_array(1, 1.0);
  const double omega = kTwoPi * 300;
  const double k = omega / kC;
  const Point2 z{-2.5, 1.0};
  const MrCircularRenderer r(one, omega, 0.5, kC);
  const int m_max = truncation_order(omega, 0.5, kC);
  ASSERT_EQ(r.order(), m_max);
  const int n_pw = 2 * m_max + 1;
  Complex d = 0.0;
  for (int n = 0; n < n_pw; ++n) {
    const double th_n = kTwoPi * n / n_pw;
    Complex phi = 0.0;
    Complex h = 0.0;
    for (int m = -m_max; m <= m_max; ++m) {
      phi += std::pow(kJ, -m) * kJ / 4.0 * hankel2(m, k * z.norm()) *
             std::exp(kJ * static_cast<double>(m) * (th_n - z.angle()));
      h += std::pow(kJ, m) * std::exp(kJ * static_cast<double>(m) * (0.0 - th_n)) / hankel2(m, k);
    }
    d += phi * (4.0 / kJ) * h;
  }
  d /= static_cast<double>(n_pw);
  EXPECT_LE(test::rel_err(r.driving(z, 1.0)(0), d), 1e-12);
}

TEST(MrCircular, LinearInAmplitudeAndRejectsInteriorSources) {
  const ArrayGeometry a = make_circular_array(16, 1.0);
  const MrCircularRenderer r(a, kTwoPi * 200, 1.0, kC);
  const ComplexVector d1 = r.driving({2.0, 1.0}, 1.0);
  const ComplexVector d2 = r.driving({2.0, 1.0}, Complex{0.0, 3.0});
  EXPECT_LE((d2 - Complex{0.0, 3.0} * d1).norm(), 1e-14 * d2.norm());
  EXPECT_THROW(r.driving({0.5, 0.2}, 1.0), std::invalid_argument);
  EXPECT_THROW(MrCircularRenderer(make_linear_array(4, 0.1, 1.0), 100.0, 1.0, kC),
               std::invalid_argument);
}

TEST(MrLinear, WindowHalfAngle) {
  const ArrayGeometry a = make_linear_array(64, 0.0625, 1.0);
  const PlaneWaveWindow w = linear_window(a);
  EXPECT_NEAR(w.theta_max, std::atan2(1.96875, 1.0), 1e-15);
  EXPECT_NEAR(w.theta_max, 1.10082, 1e-5);
  EXPECT_NEAR(w.width(), 2.0 * std::atan(1.96875), 1e-14);
}

TEST(MrLinear, ScalarFilterIsPlaneWaveOverGreen) {
  const ArrayGeometry one = make_linear_array(1, 0.1, 1.0);
  const PointSet cp{{{-0.3, 0.2}}, PointRole::kControl};
  const double omega = kTwoPi * 250;
  const double th = 0.4;
  const ComplexVector h = mr_linear_filters(one, cp, th, omega, 0.0, kC);
  const Complex expected =
      plane_wave_field(cp.points[0], th, omega, kC) / green2d(cp.points[0], {1.0, 0.0}, omega, kC);
  EXPECT_LE(test::rel_err(h(0), expected), 1e-12);
}

TEST(MrLinear, HeavyRegularizationVanishes) {
  const ArrayGeometry a = make_linear_array(8, 0.25, 1.0);
  const PointSet cp = sample_control_points({default_linear_listening_rectangle(1.0), 0.02}, 30);
  EXPECT_LT(mr_linear_filters(a, cp, 0.1, kTwoPi * 300, 1e14, kC).norm(), 1e-12);
}

TEST(MrLinear, SinglePlaneWaveTerm) {
  const ArrayGeometry a = make_linear_array(16, 0.25, 1.0);
  const ListeningArea area{default_linear_listening_rectangle(1.0), 0.02};
  const PointSet cp = sample_control_points(area, 60);
  const double omega = kTwoPi * 200;
  const Point2 z{2.5, 0.4};
  const MrLinearRenderer r(a, cp, omega, 1e-2, area.max_radius(), kC, 1);
  const PlaneWaveWindow w = linear_window(a);
  const double th = w.sample(0, 1);
  const HerglotzDensity phi(z, 1.0, r.order(), omega, kC);
  const ComplexVector expected =
      (w.width() / kTwoPi) * phi(th) * mr_linear_filters(a, cp, th, omega, 1e-2, kC);
  EXPECT_LE((r.driving(z, 1.0) - expected).norm(), 1e-12 * expected.norm());
}

TEST(MrLinear, ReproducesFrontalSource) {
  const ArrayGeometry a = make_linear_array(64, 0.0625, 1.0);
  const ListeningArea area{default_linear_listening_rectangle(1.0), 0.02};
  const PointSet cp = sample_control_points(area, 660);
  const PointSet grid = sample_listening_grid(area);
  const double omega = kTwoPi * 500;
  const Point2 z{2.0, 0.0};
  const ComplexVector d = mr_linear_driving(a, z, 1.0, cp, omega, 1e-2, area.max_radius(), kC);
  EXPECT_LE(field_nre(a, d, grid, z, omega), -10.0);
}

TEST(Pm, ExactInverseWhenSquare) {
  std::mt19937_64 rng(2);
  const ComplexMatrix g = test::random_complex(6, 6, rng);
  const PmOperator op(g, 0.0, 1.0);
  EXPECT_LE((op.matrix() * g - ComplexMatrix::Identity(6, 6)).norm(), 1e-8);
}

TEST(Pm, NormalEquationResidual) {
  std::mt19937_64 rng(3);
  for (double lambda : {1e-6, 1e-2, 1.0}) {
    const ComplexMatrix g = test::random_complex(40, 9, rng);
    const PmOperator op(g, lambda, 1.0);
    const ComplexMatrix lhs =
        (g.adjoint() * g + lambda * ComplexMatrix::Identity(9, 9)) * op.matrix();
    EXPECT_LE((lhs - g.adjoint()).norm(), 1e-8 * g.norm());
  }
}

TEST(Pm, LargeRegularizationApproachesScaledAdjoint) {
  std::mt19937_64 rng(4);
  const ComplexMatrix g = test::random_complex(12, 5, rng);
  const double lambda = 1e8;
  const PmOperator op(g, lambda, 1.0);
  EXPECT_LE((op.matrix() * lambda - g.adjoint()).norm(), 1e-5 * g.norm());
}

TEST(Pm, ZeroPressureAndErrors) {
  std::mt19937_64 rng(5);
  const ComplexMatrix g = test::random_complex(10, 4, rng);
  const PmOperator op(g, 1e-2, 1.0);
  EXPECT_EQ(pm_driving(op, ComplexVector::Zero(10)).norm(), 0.0);
  EXPECT_THROW(pm_driving(op, ComplexVector::Zero(9)), std::invalid_argument);
  ComplexMatrix dup = g;
  dup.col(1) = dup.col(0);
  EXPECT_THROW(PmOperator(dup, 0.0, 1.0), SolverError);
}

TEST(Pm, GeometricOperatorMatchesTransfer) {
  const ArrayGeometry a = make_circular_array(16, 1.0);
  const PointSet cp = sample_control_points({Disk{{0, 0}, 1.0}, 0.02}, 61);
  const double omega = kTwoPi * 150;
  const PmOperator op = pm_operator(a, cp, omega, 1e-2, kC);
  EXPECT_EQ(op.transfer(), transfer_matrix(cp.points, a.active_positions(), omega, kC));
  EXPECT_EQ(op.control_count(), cp.size());
  EXPECT_EQ(op.speaker_count(), 16u);
}

TEST(Banks, ShapesAndProvenance) {
  const ArrayGeometry a = decimate_array(make_circular_array(16, 1.0), 8, 1);
  const PointSet cp = sample_control_points({Disk{{0, 0}, 1.0}, 0.02}, 61);
  const FrequencyGrid f = FrequencyGrid::uniform(46.0, 23.0, 5);
  const Source s{{2.0, -1.0}, {}};
  const DrivingSignals mr = MrBank(a, f, 1.0, cp, 1e-2).driving(s);
  EXPECT_EQ(mr.values.rows(), 8);
  EXPECT_EQ(mr.values.cols(), 5);
  EXPECT_EQ(mr.provenance, Provenance::kMr);
  EXPECT_NO_THROW(mr.validate(8, 5));
  EXPECT_THROW(mr.validate(8, 4), std::invalid_argument);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const ComplexVector col =
        mr_circular_driving(a, s.position, 1.0, f.omega(k), 1.0, f.c());
    EXPECT_LE((mr.values.col(static_cast<Eigen::Index>(k)) - col).norm(), 1e-14 * col.norm());
  }
  const PmBank pm(a, cp, f, 1e-2);
  const DrivingSignals d = pm.driving(s);
  EXPECT_EQ(d.provenance, Provenance::kPm);
  const ComplexVector d2 = pm.at(2).driving(monopole_field(cp.points, s.position, f.omega(2), f.c()));
  EXPECT_LE((d.values.col(2) - d2).norm(), 1e-14 * d2.norm());
  EXPECT_THROW(MrBank(a, FrequencyGrid(), 1.0, cp, 1e-2), std::invalid_argument);
}

}  // namespace
}  // namespace sfs
