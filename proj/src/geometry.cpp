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

#include "sfs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace sfs {
namespace {

// Number of grid steps of size `step` that fit in `extent`, tolerant to the
// representation error of decimal spacings (2.0 / 0.02 is not exactly 100).
std::size_t fitting_steps(double extent, double step) {
  const double ratio = extent / step;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) < 1e-9 * std::max(1.0, nearest)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::floor(ratio));
}

std::vector<Point2> rectangle_cell_centres(const Rectangle& r, std::size_t n_short) {
  const double step = std::min(r.width(), r.height()) / static_cast<double>(n_short);
  const std::size_t nx = std::max<std::size_t>(1, fitting_steps(r.width(), step));
  const std::size_t ny = std::max<std::size_t>(1, fitting_steps(r.height(), step));
  const double ox = r.xmin + 0.5 * (r.width() - static_cast<double>(nx) * step);
  const double oy = r.ymin + 0.5 * (r.height() - static_cast<double>(ny) * step);
  std::vector<Point2> pts;
  pts.reserve(nx * ny);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      pts.push_back({ox + (static_cast<double>(ix) + 0.5) * step,
                     oy + (static_cast<double>(iy) + 0.5) * step});
    }
  }
  return pts;
}

std::vector<Point2> disk_cell_centres(const Disk& d, std::size_t n) {
  const double step = 2.0 * d.radius / static_cast<double>(n);
  const double keep = d.radius - kMinClearance;
  std::vector<Point2> pts;
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      const Point2 offset{(static_cast<double>(ix) + 0.5 - 0.5 * static_cast<double>(n)) * step,
                          (static_cast<double>(iy) + 0.5 - 0.5 * static_cast<double>(n)) * step};
      if (offset.norm() < keep) pts.push_back(d.center + offset);
    }
  }
  return pts;
}

}  // namespace

std::size_t ArrayGeometry::active_count() const {
  return static_cast<std::size_t>(std::count(active_.begin(), active_.end(), true));
}

std::vector<std::size_t> ArrayGeometry::active_indices() const {
  std::vector<std::size_t> idx;
  for (std::size_t l = 0; l < active_.size(); ++l) {
    if (active_[l]) idx.push_back(l);
  }
  return idx;
}

std::vector<Point2> ArrayGeometry::active_positions() const {
  std::vector<Point2> out;
  for (std::size_t l : active_indices()) out.push_back(positions_[l]);
  return out;
}

std::vector<Polar> ArrayGeometry::active_polar() const {
  std::vector<Polar> out;
  for (std::size_t l : active_indices()) out.push_back(polar_[l]);
  return out;
}

ArrayGeometry make_circular_array(std::size_t count, double radius) {
  if (count == 0) throw std::invalid_argument("make_circular_array: count must be >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("make_circular_array: radius must be > 0");
  ArrayGeometry a;
  a.family_ = ArrayFamily::kCircular;
  a.radius_ = radius;
  a.positions_.reserve(count);
  a.polar_.reserve(count);
  for (std::size_t l = 0; l < count; ++l) {
    const double theta = kTwoPi * static_cast<double>(l) / static_cast<double>(count);
    a.polar_.push_back({radius, theta});
    a.positions_.push_back({radius * std::cos(theta), radius * std::sin(theta)});
  }
  a.active_.assign(count, true);
  return a;
}

ArrayGeometry make_linear_array(std::size_t count, double spacing, double x0) {
  if (count == 0) throw std::invalid_argument("make_linear_array: count must be >= 1");
  if (!(spacing > 0.0)) throw std::invalid_argument("make_linear_array: spacing must be > 0");
  ArrayGeometry a;
  a.family_ = ArrayFamily::kLinear;
  a.x0_ = x0;
  a.spacing_ = spacing;
  const double half = 0.5 * static_cast<double>(count - 1);
  a.y0_ = half * spacing;
  for (std::size_t l = 0; l < count; ++l) {
    const Point2 p{x0, (static_cast<double>(l) - half) * spacing};
    a.positions_.push_back(p);
    a.polar_.push_back({p.norm(), p.angle()});
  }
  a.active_.assign(count, true);
  return a;
}

ArrayGeometry decimate_array(const ArrayGeometry& array, std::size_t n_remove,
                             std::uint64_t seed) {
  const std::size_t total = array.total_count();
  if (n_remove >= total) {
    throw std::invalid_argument("decimate_array: n_remove must be smaller than the array size");
  }
  // Partial Fisher-Yates over the full index set.
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n_remove; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, total - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  ArrayGeometry out = array;
  out.active_.assign(total, true);
  for (std::size_t i = 0; i < n_remove; ++i) out.active_[order[i]] = false;
  return out;
}

ArrayGeometry with_active_mask(const ArrayGeometry& array, const std::vector<bool>& mask) {
  if (mask.size() != array.total_count()) {
    throw std::invalid_argument("with_active_mask: mask length differs from the array size");
  }
  ArrayGeometry out = array;
  out.active_ = mask;
  return out;
}

bool ListeningArea::contains(Point2 p) const {
  if (const auto* d = std::get_if<Disk>(&shape)) {
    return distance(p, d->center) <= d->radius * (1.0 + 1e-12);
  }
  const auto& r = std::get<Rectangle>(shape);
  const double tol = 1e-12 * std::max({1.0, std::abs(r.xmax), std::abs(r.ymax)});
  return p.x >= r.xmin - tol && p.x <= r.xmax + tol && p.y >= r.ymin - tol && p.y <= r.ymax + tol;
}

double ListeningArea::max_radius() const {
  if (const auto* d = std::get_if<Disk>(&shape)) return d->center.norm() + d->radius;
  const auto& r = std::get<Rectangle>(shape);
  const double ax = std::max(std::abs(r.xmin), std::abs(r.xmax));
  const double ay = std::max(std::abs(r.ymin), std::abs(r.ymax));
  return std::hypot(ax, ay);
}

Rectangle default_linear_listening_rectangle(double x0) {
  return {x0 - 2.2, x0 - 0.2, -1.0, 1.0};
}

void validate(const ListeningArea& area) {
  if (!(area.spacing > 0.0)) throw std::invalid_argument("listening area: spacing must be > 0");
  if (const auto* d = std::get_if<Disk>(&area.shape)) {
    if (!(d->radius > 0.0)) throw std::invalid_argument("listening area: disk radius must be > 0");
  } else {
    const auto& r = std::get<Rectangle>(area.shape);
    if (!(r.width() >= 0.0 && r.height() >= 0.0)) {
      throw std::invalid_argument("listening area: rectangle has negative extent");
    }
  }
}

void validate_for_linear_array(const ListeningArea& area, double x0) {
  validate(area);
  const auto* r = std::get_if<Rectangle>(&area.shape);
  if (r == nullptr) throw std::invalid_argument("linear arrays need a rectangular listening area");
  if (!(r->xmax < x0)) {
    throw std::invalid_argument("listening rectangle must lie in the half-plane x < x0");
  }
}

PointSet sample_listening_grid(const ListeningArea& area) {
  validate(area);
  PointSet set{{}, PointRole::kListening};
  const double s = area.spacing;
  if (const auto* d = std::get_if<Disk>(&area.shape)) {
    const auto n = static_cast<long>(fitting_steps(d->radius, s));
    const double r2 = (d->radius / s) * (d->radius / s) * (1.0 + 1e-12);
    for (long iy = -n; iy <= n; ++iy) {
      for (long ix = -n; ix <= n; ++ix) {
        if (static_cast<double>(ix * ix + iy * iy) <= r2) {
          set.points.push_back({d->center.x + static_cast<double>(ix) * s,
                                d->center.y + static_cast<double>(iy) * s});
        }
      }
    }
    return set;
  }
  const auto& r = std::get<Rectangle>(area.shape);
  const std::size_t nx = fitting_steps(r.width(), s) + 1;
  const std::size_t ny = fitting_steps(r.height(), s) + 1;
  set.points.reserve(nx * ny);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      set.points.push_back(
          {r.xmin + static_cast<double>(ix) * s, r.ymin + static_cast<double>(iy) * s});
    }
  }
  return set;
}

PointSet sample_control_points(const ListeningArea& area, std::size_t target_count) {
  validate(area);
  if (target_count == 0) throw std::invalid_argument("sample_control_points: target must be >= 1");
  if (target_count > sample_listening_grid(area).size()) {
    throw std::invalid_argument(
        "sample_control_points: target exceeds the listening-grid resolution");
  }
  std::vector<Point2> best;
  if (const auto* d = std::get_if<Disk>(&area.shape)) {
    // The disk count is not monotone in n, so scan every resolution coarser
    // than the listening grid and keep the largest admissible one.
    for (std::size_t n = 1; 2.0 * d->radius / static_cast<double>(n) >= area.spacing; ++n) {
      auto pts = disk_cell_centres(*d, n);
      if (pts.size() <= target_count && pts.size() > best.size()) best = std::move(pts);
    }
  } else {
    const auto& r = std::get<Rectangle>(area.shape);
    for (std::size_t n = 1; std::min(r.width(), r.height()) / static_cast<double>(n) >= area.spacing;
         ++n) {
      auto pts = rectangle_cell_centres(r, n);
      if (pts.size() > target_count) break;
      best = std::move(pts);
    }
  }
  if (best.empty()) {
    throw std::invalid_argument("sample_control_points: no grid fits inside the area");
  }
  return {std::move(best), PointRole::kControl};
}

PointSet filter_clearance(const PointSet& set, std::span<const Point2> speakers,
                          double clearance) {
  PointSet out{{}, set.role};
  for (const Point2& p : set.points) {
    const bool clear = std::all_of(speakers.begin(), speakers.end(),
                                   [&](Point2 s) { return distance(p, s) > clearance; });
    if (clear) out.points.push_back(p);
  }
  return out;
}

}  // namespace sfs
