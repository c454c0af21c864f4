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

#ifndef SFS_GEOMETRY_HPP_
#define SFS_GEOMETRY_HPP_

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "sfs/types.hpp"

namespace sfs {

enum class ArrayFamily { kCircular, kLinear };

// Points closer than this to a loudspeaker are never used as control or
// evaluation points (the 2D Green's function is log-singular there).
inline constexpr double kMinClearance = 0.05;

struct Polar {
  double rho = 0.0;
  double theta = 0.0;
};

// Loudspeaker layout of a regular array plus the mask left after decimation.
// Positions always describe the full regular array; decimation only flips
// entries of the mask.
class ArrayGeometry {
 public:
  ArrayFamily family() const { return family_; }
  std::size_t total_count() const { return positions_.size(); }
  std::size_t active_count() const;

  std::span<const Point2> positions() const { return positions_; }
  std::span<const Polar> polar() const { return polar_; }
  const std::vector<bool>& active_mask() const { return active_; }

  std::vector<std::size_t> active_indices() const;
  std::vector<Point2> active_positions() const;
  std::vector<Polar> active_polar() const;

  // Circular arrays only.
  double radius() const { return radius_; }
  // Linear arrays only: line abscissa, half aperture and pitch.
  double x0() const { return x0_; }
  double y0() const { return y0_; }
  double spacing() const { return spacing_; }

  friend ArrayGeometry make_circular_array(std::size_t count, double radius);
  friend ArrayGeometry make_linear_array(std::size_t count, double spacing, double x0);
  friend ArrayGeometry decimate_array(const ArrayGeometry& array, std::size_t n_remove,
                                      std::uint64_t seed);
  friend ArrayGeometry with_active_mask(const ArrayGeometry& array, const std::vector<bool>& mask);

 private:
  ArrayFamily family_ = ArrayFamily::kCircular;
  std::vector<Point2> positions_;
  std::vector<Polar> polar_;
  std::vector<bool> active_;
  double radius_ = 0.0;
  double x0_ = 0.0;
  double y0_ = 0.0;
  double spacing_ = 0.0;
};

// theta_l = 2*pi*l/L counterclockwise from +x, all loudspeakers active.
ArrayGeometry make_circular_array(std::size_t count, double radius);

// Loudspeakers on x = x0, centred on y = 0.
ArrayGeometry make_linear_array(std::size_t count, double spacing, double x0);

// Deactivates exactly n_remove loudspeakers drawn uniformly without
// replacement. Deterministic for a fixed seed.
ArrayGeometry decimate_array(const ArrayGeometry& array, std::size_t n_remove,
                             std::uint64_t seed);

// Copy of `array` with an explicit activity mask, e.g. one read back from disk.
ArrayGeometry with_active_mask(const ArrayGeometry& array, const std::vector<bool>& mask);

struct Disk {
  Point2 center;
  double radius = 1.0;
};

struct Rectangle {
  double xmin = 0.0;
  double xmax = 0.0;
  double ymin = 0.0;
  double ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
};

struct ListeningArea {
  std::variant<Disk, Rectangle> shape;
  double spacing = 0.02;

  bool contains(Point2 p) const;
  // Largest distance from the origin of any point of the area.
  double max_radius() const;
};

// The default listening rectangle for a linear array at x0: 2 m x 2 m,
// x in [x0 - 2.2, x0 - 0.2], y in [-1, 1].
Rectangle default_linear_listening_rectangle(double x0);

// Throws std::invalid_argument when the area is malformed (non-positive
// spacing, empty extent).
void validate(const ListeningArea& area);
void validate_for_linear_array(const ListeningArea& area, double x0);

enum class PointRole { kListening, kControl };

struct PointSet {
  std::vector<Point2> points;
  PointRole role = PointRole::kListening;

  std::size_t size() const { return points.size(); }
};

// Regular Cartesian grid with the area's spacing. Rectangles include both
// edges; for disks the lattice is anchored at the centre and points farther
// than the radius are discarded.
PointSet sample_listening_grid(const ListeningArea& area);

// Coarse regular grid of cell-centred points whose size is the largest
// achievable count not exceeding target_count. Disk grids keep a
// kMinClearance margin from the rim, where circular arrays sit.
PointSet sample_control_points(const ListeningArea& area, std::size_t target_count);

// Drops points closer than `clearance` to any of `speakers`.
PointSet filter_clearance(const PointSet& set, std::span<const Point2> speakers,
                          double clearance);

}  // namespace sfs

#endif  // SFS_GEOMETRY_HPP_
