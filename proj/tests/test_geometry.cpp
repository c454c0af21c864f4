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
#include <set>

#include <gtest/gtest.h>

#include "sfs/geometry.hpp"

namespace sfs {
namespace {

TEST(CircularArray, FourLoudspeakersOnAxes) {
  const ArrayGeometry a = make_circular_array(4, 1.0);
  const Point2 expected[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  ASSERT_EQ(a.total_count(), 4u);
  for (std::size_t l = 0; l < 4; ++l) {
    EXPECT_NEAR(a.positions()[l].x, expected[l].x, 1e-15);
    EXPECT_NEAR(a.positions()[l].y, expected[l].y, 1e-15);
    EXPECT_NEAR(a.polar()[l].theta, kPi / 2 * static_cast<double>(l), 1e-15);
    EXPECT_DOUBLE_EQ(a.polar()[l].rho, 1.0);
  }
}

TEST(CircularArray, SixtyFourUniformArcSpacing) {
  const ArrayGeometry a = make_circular_array(64, 1.0);
  ASSERT_EQ(a.total_count(), 64u);
  for (std::size_t l = 1; l < 64; ++l) {
    EXPECT_NEAR(a.polar()[l].theta - a.polar()[l - 1].theta, kTwoPi / 64, 1e-14);
  }
  EXPECT_EQ(a.active_count(), 64u);
}

TEST(CircularArray, SingleLoudspeaker) {
  const ArrayGeometry a = make_circular_array(1, 2.0);
  ASSERT_EQ(a.total_count(), 1u);
  EXPECT_EQ(a.positions()[0], (Point2{2.0, 0.0}));
}

TEST(CircularArray, RejectsBadArguments) {
  EXPECT_THROW(make_circular_array(0, 1.0), std::invalid_argument);
  EXPECT_THROW(make_circular_array(4, 0.0), std::invalid_argument);
  EXPECT_THROW(make_circular_array(4, -1.0), std::invalid_argument);
}

TEST(LinearArray, ThreeCentered) {
  const ArrayGeometry a = make_linear_array(3, 0.0625, 1.0);
  EXPECT_DOUBLE_EQ(a.positions()[0].y, -0.0625);
  EXPECT_DOUBLE_EQ(a.positions()[1].y, 0.0);
  EXPECT_DOUBLE_EQ(a.positions()[2].y, 0.0625);
  for (const Point2& p : a.positions()) EXPECT_DOUBLE_EQ(p.x, 1.0);
}

TEST(LinearArray, SixtyFourAperture) {
  const ArrayGeometry a = make_linear_array(64, 0.0625, 1.0);
  EXPECT_DOUBLE_EQ(a.positions()[63].y - a.positions()[0].y, 3.9375);
  EXPECT_DOUBLE_EQ(a.y0(), 1.96875);
  EXPECT_DOUBLE_EQ(a.x0(), 1.0);
}

TEST(LinearArray, TwoUnitSpacing) {
  const ArrayGeometry a = make_linear_array(2, 1.0, 0.5);
  EXPECT_DOUBLE_EQ(a.positions()[0].y, -0.5);
  EXPECT_DOUBLE_EQ(a.positions()[1].y, 0.5);
}

TEST(Decimation, DeterministicForSeed) {
  const ArrayGeometry full = make_circular_array(64, 1.0);
  const ArrayGeometry a = decimate_array(full, 32, 7);
  const ArrayGeometry b = decimate_array(full, 32, 7);
  EXPECT_EQ(a.active_count(), 32u);
  EXPECT_EQ(a.active_mask(), b.active_mask());
  EXPECT_NE(a.active_mask(), decimate_array(full, 32, 8).active_mask());
}

TEST(Decimation, IdentityAndCounts) {
  const ArrayGeometry full = make_circular_array(64, 1.0);
  EXPECT_EQ(decimate_array(full, 0, 0).active_count(), 64u);
  EXPECT_EQ(decimate_array(full, 48, 3).active_count(), 16u);
  EXPECT_THROW(decimate_array(full, 64, 0), std::invalid_argument);
}

TEST(Decimation, KeepsRegularPositions) {
  const ArrayGeometry full = make_circular_array(16, 1.0);
  const ArrayGeometry a = decimate_array(full, 8, 1);
  const std::vector<Point2> act = a.active_positions();
  const std::vector<std::size_t> idx = a.active_indices();
  ASSERT_EQ(act.size(), 8u);
  for (std::size_t i = 0; i < idx.size(); ++i) EXPECT_EQ(act[i], full.positions()[idx[i]]);
  EXPECT_EQ(a.total_count(), 16u);
}

TEST(ListeningGrid, RectangleCounts) {
  EXPECT_EQ(sample_listening_grid({Rectangle{-1, 1, -1, 1}, 0.02}).size(), 10201u);
  EXPECT_EQ(sample_listening_grid({Rectangle{0, 0.04, 0, 0.04}, 0.02}).size(), 9u);
}

TEST(ListeningGrid, DiskMatchesLatticeCount) {
  // Integer lattice count of i^2 + j^2 <= 50^2.
  std::size_t expected = 0;
  for (int i = -50; i <= 50; ++i) {
    for (int j = -50; j <= 50; ++j) expected += (i * i + j * j <= 2500) ? 1 : 0;
  }
  const PointSet grid = sample_listening_grid({Disk{{0, 0}, 1.0}, 0.02});
  EXPECT_EQ(grid.size(), expected);
  EXPECT_NEAR(static_cast<double>(grid.size()), 7845.0, 10.0);
  for (const Point2& p : grid.points) EXPECT_LE(p.norm(), 1.0 + 1e-12);
}

TEST(ControlPoints, RectangleNearestFeasible) {
  const ListeningArea area{Rectangle{-1, 1, -1, 1}, 0.02};
  // Uniform square cells: n x n cells for n per side.
  std::size_t best = 0;
  for (std::size_t n = 1; n <= 100; ++n) {
    if (n * n <= 660) best = n * n;
  }
  const PointSet cp = sample_control_points(area, 660);
  EXPECT_EQ(cp.size(), best);
  EXPECT_LE(cp.size(), 660u);
  for (const Point2& p : cp.points) EXPECT_TRUE(area.contains(p));
}

TEST(ControlPoints, DiskWithinTargetAndInside) {
  const ListeningArea area{Disk{{0, 0}, 1.0}, 0.02};
  const PointSet cp = sample_control_points(area, 276);
  EXPECT_LE(cp.size(), 276u);
  EXPECT_GT(cp.size(), 200u);
  for (const Point2& p : cp.points) EXPECT_LT(p.norm(), 1.0 - kMinClearance);
}

TEST(ControlPoints, SinglePointAtCentre) {
  const PointSet cp = sample_control_points({Rectangle{-1, 1, -1, 1}, 0.02}, 1);
  ASSERT_EQ(cp.size(), 1u);
  EXPECT_NEAR(cp.points[0].x, 0.0, 1e-15);
  EXPECT_NEAR(cp.points[0].y, 0.0, 1e-15);
}

TEST(ControlPoints, RejectsTargetsBeyondGrid) {
  const ListeningArea area{Rectangle{0, 0.04, 0, 0.04}, 0.02};
  EXPECT_THROW(sample_control_points(area, 10), std::invalid_argument);
  EXPECT_THROW(sample_control_points(area, 0), std::invalid_argument);
}

TEST(ListeningArea, ContainsAndMaxRadius) {
  const ListeningArea disk{Disk{{0.5, 0}, 1.0}, 0.02};
  EXPECT_TRUE(disk.contains({1.5, 0}));
  EXPECT_FALSE(disk.contains({1.51, 0}));
  EXPECT_DOUBLE_EQ(disk.max_radius(), 1.5);
  const ListeningArea rect{default_linear_listening_rectangle(1.0), 0.02};
  EXPECT_DOUBLE_EQ(rect.max_radius(), std::hypot(1.2, 1.0));
  EXPECT_NO_THROW(validate_for_linear_array(rect, 1.0));
  EXPECT_THROW(validate_for_linear_array(rect, -0.5), std::invalid_argument);
  EXPECT_THROW(validate_for_linear_array(disk, 1.0), std::invalid_argument);
}

TEST(Clearance, DropsPointsNearLoudspeakers) {
  const ArrayGeometry a = make_circular_array(4, 1.0);
  const PointSet set{{{0.97, 0.0}, {0.9, 0.0}, {0.0, 0.0}}, PointRole::kListening};
  const PointSet kept = filter_clearance(set, a.positions(), kMinClearance);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept.points[0], (Point2{0.9, 0.0}));
}

}  // namespace
}  // namespace sfs
