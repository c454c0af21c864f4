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

#include "sfs/datasets.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "sfs/io.hpp"
#include "sfs/renderers.hpp"

namespace sfs {
namespace {

constexpr std::uint32_t kDatasetVersion = 1;

// Seeded choice of `count` indices out of [0, n), returned sorted.
std::vector<std::size_t> choose(std::size_t n, std::size_t count, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<Source> shifted_subset(const std::vector<Source>& base, std::size_t n_test,
                                   std::mt19937_64& rng, Point2 (*shift)(Point2, double),
                                   double amount) {
  std::vector<std::size_t> keep(base.size());
  std::iota(keep.begin(), keep.end(), std::size_t{0});
  if (n_test != 0) {
    if (n_test > base.size()) {
      throw GenerationError("requested more test sources than train and validation sources");
    }
    keep = choose(base.size(), n_test, rng);
  }
  std::vector<Source> out;
  out.reserve(keep.size());
  for (std::size_t i : keep) out.push_back({shift(base[i].position, amount), {}});
  return out;
}

Point2 radial_shift(Point2 p, double amount) {
  const double r = p.norm();
  return (1.0 + amount / r) * p;
}

Point2 x_shift(Point2 p, double amount) { return {p.x + amount, p.y}; }

void write_point_list(BinaryWriter& w, const std::vector<Point2>& pts) {
  w.u32(static_cast<std::uint32_t>(pts.size()));
  for (const Point2& p : pts) {
    w.f64(p.x);
    w.f64(p.y);
  }
}

}  // namespace

const char* to_string(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTest:
      return "test";
  }
  return "?";
}

void SourceSplit::check_disjoint() const {
  std::map<std::pair<double, double>, const char*> seen;
  const auto add = [&](const std::vector<Source>& set, const char* name) {
    for (const Source& s : set) {
      const auto [it, inserted] = seen.emplace(std::pair{s.position.x, s.position.y}, name);
      if (!inserted) {
        throw GenerationError(std::string("source sets overlap: ") + it->second + " and " + name);
      }
    }
  };
  add(train, "train");
  add(val, "val");
  add(test, "test");
}

SourceSplit gen_sources_circular(const CircularProtocol& p, std::uint64_t seed) {
  if (p.n_radii == 0 || p.n_angles == 0) throw std::invalid_argument("empty source grid");
  if (!(p.radius_min > 0.0 && p.radius_max >= p.radius_min)) {
    throw std::invalid_argument("source radius range must satisfy 0 < min <= max");
  }
  if (!(p.test_shift > 0.0)) throw std::invalid_argument("test shift must be > 0");
  const std::size_t total = p.n_radii * p.n_angles;
  if (p.n_val >= total) throw std::invalid_argument("validation set must leave training sources");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(p.radius_min, p.radius_max);
  std::vector<Source> all;
  all.reserve(total);
  for (std::size_t r = 0; r < p.n_radii; ++r) {
    const double rho = p.radius_min == p.radius_max ? p.radius_min : radius(rng);
    for (std::size_t a = 0; a < p.n_angles; ++a) {
      const double th = kTwoPi * static_cast<double>(a) / static_cast<double>(p.n_angles);
      all.push_back({{rho * std::cos(th), rho * std::sin(th)}, {}});
    }
  }
  const std::vector<std::size_t> val_idx = choose(total, p.n_val, rng);
  SourceSplit split;
  split.seed = seed;
  std::size_t v = 0;
  for (std::size_t i = 0; i < total; ++i) {
    if (v < val_idx.size() && val_idx[v] == i) {
      split.val.push_back(all[i]);
      ++v;
    } else {
      split.train.push_back(all[i]);
    }
  }
  std::vector<Source> base = split.train;
  base.insert(base.end(), split.val.begin(), split.val.end());
  split.test = shifted_subset(base, p.n_test, rng, radial_shift, p.test_shift);
  split.check_disjoint();
  return split;
}

Rectangle default_linear_source_region(double x0) { return {x0 + 0.2, x0 + 2.2, -2.0, 2.0}; }

SourceSplit gen_sources_linear(const LinearProtocol& p, std::uint64_t seed) {
  if (p.n_train == 0 || p.n_val == 0) throw std::invalid_argument("empty train or val set");
  if (!(p.region.width() >= 0.0 && p.region.height() >= 0.0)) {
    throw std::invalid_argument("source region has negative extent");
  }
  if (!(p.test_shift > 0.0)) throw std::invalid_argument("test shift must be > 0");
  if (p.n_test > p.n_train + p.n_val) {
    throw std::invalid_argument("n_test may not exceed n_train + n_val");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(p.region.xmin, p.region.xmax);
  std::uniform_real_distribution<double> uy(p.region.ymin, p.region.ymax);
  SourceSplit split;
  split.seed = seed;
  for (std::size_t i = 0; i < p.n_train + p.n_val; ++i) {
    const double x = ux(rng);
    const Source s{{x, uy(rng)}, {}};
    (i < p.n_train ? split.train : split.val).push_back(s);
  }
  for (std::size_t i = 0; i < p.n_test; ++i) {
    const Source& s = i < p.n_train ? split.train[i] : split.val[i - p.n_train];
    split.test.push_back({x_shift(s.position, p.test_shift), {}});
  }
  split.check_disjoint();
  return split;
}

void check_sources_outside(const SourceSplit& split, const ListeningArea& area,
                           const ArrayGeometry& array) {
  for (const auto* set : {&split.train, &split.val, &split.test}) {
    for (const Source& s : *set) {
      if (area.contains(s.position)) {
        throw GenerationError("a source lies inside the listening area");
      }
      if (array.family() == ArrayFamily::kCircular && !(s.rho() > array.radius())) {
        throw GenerationError("a source lies inside the circular array");
      }
    }
  }
}

std::string Dataset::geometry_hash() const {
  std::ostringstream os;
  os << static_cast<int>(array.family()) << ';' << array.total_count() << ';';
  for (std::size_t l = 0; l < array.total_count(); ++l) {
    os << format_double(array.positions()[l].x) << ',' << format_double(array.positions()[l].y)
       << ',' << (array.active_mask()[l] ? 1 : 0) << ';';
  }
  for (const Point2& p : control.points) os << format_double(p.x) << ',' << format_double(p.y) << ';';
  for (double f : freqs.hz()) os << format_double(f) << ';';
  os << format_double(freqs.c());
  return sha256_hex(os.str());
}

std::vector<const DatasetRecord*> Dataset::select(Split s) const {
  std::vector<const DatasetRecord*> out;
  for (const DatasetRecord& r : records) {
    if (r.split == s) out.push_back(&r);
  }
  return out;
}

Dataset build_dataset(const ArrayGeometry& array, const SourceSplit& split,
                      const PointSet& control, const FrequencyGrid& freqs,
                      double listening_radius, double lambda) {
  if (control.size() == 0) throw std::invalid_argument("build_dataset: no control points");
  Dataset ds{array, freqs, control, listening_radius, lambda, split.seed, {}};
  const MrBank mr(array, freqs, listening_radius, control, lambda);
  std::uint32_t id = 0;
  for (const auto& [set, tag] : {std::pair{&split.train, Split::kTrain},
                                 std::pair{&split.val, Split::kVal},
                                 std::pair{&split.test, Split::kTest}}) {
    for (const Source& s : *set) {
      try {
        DatasetRecord r;
        r.source_id = id;
        r.split = tag;
        r.position = s.position;
        r.tensor = pack_driving(mr.driving(s).values);
        r.pressure.resize(static_cast<Eigen::Index>(control.size()),
                          static_cast<Eigen::Index>(freqs.size()));
        for (std::size_t k = 0; k < freqs.size(); ++k) {
          r.pressure.col(static_cast<Eigen::Index>(k)) =
              s.amplitude(k) * monopole_field(control.points, s.position, freqs.omega(k), freqs.c());
        }
        ds.records.push_back(std::move(r));
      } catch (const std::exception& e) {
        throw GenerationError("source " + std::to_string(id) + ": " + e.what());
      }
      ++id;
    }
  }
  return ds;
}

void write_dataset(const std::filesystem::path& path, const Dataset& ds) {
  BinaryWriter w(path);
  w.magic("SFSX");
  w.u32(kDatasetVersion);
  const std::string hash = ds.geometry_hash();
  w.text(hash);
  const ArrayGeometry& a = ds.array;
  w.u32(static_cast<std::uint32_t>(a.family()));
  w.u32(static_cast<std::uint32_t>(a.total_count()));
  w.f64(a.radius());
  w.f64(a.x0());
  w.f64(a.spacing());
  for (bool on : a.active_mask()) w.u32(on ? 1 : 0);
  w.u32(static_cast<std::uint32_t>(ds.freqs.size()));
  w.f64s(ds.freqs.hz());
  w.f64(ds.freqs.c());
  write_point_list(w, ds.control.points);
  w.f64(ds.listening_radius);
  w.f64(ds.lambda);
  w.u64(ds.seed);
  w.u32(static_cast<std::uint32_t>(ds.records.size()));
  const Eigen::Index rows = 2 * static_cast<Eigen::Index>(a.active_count());
  const Eigen::Index cols = static_cast<Eigen::Index>(ds.freqs.size());
  for (const DatasetRecord& r : ds.records) {
    if (r.tensor.rows() != rows || r.tensor.cols() != cols ||
        r.pressure.rows() != static_cast<Eigen::Index>(ds.control.size()) ||
        r.pressure.cols() != cols) {
      throw std::invalid_argument("write_dataset: record shape does not match the header");
    }
    w.u32(r.source_id);
    w.u32(static_cast<std::uint32_t>(r.split));
    w.f64(r.position.x);
    w.f64(r.position.y);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index k = 0; k < cols; ++k) w.f64(r.tensor(i, k));
    }
    for (Eigen::Index i = 0; i < r.pressure.rows(); ++i) {
      for (Eigen::Index k = 0; k < cols; ++k) {
        w.f64(r.pressure(i, k).real());
        w.f64(r.pressure(i, k).imag());
      }
    }
  }
  w.close();
}

Dataset read_dataset(const std::filesystem::path& path) {
  BinaryReader r(path);
  r.expect_magic("SFSX");
  if (r.u32() != kDatasetVersion) throw FormatError(path.string() + ": unsupported version");
  const std::string hash = r.text(64);
  const auto family = r.u32();
  if (family > 1) throw FormatError(path.string() + ": unknown array family");
  const std::uint32_t total = r.u32();
  const double radius = r.f64();
  const double x0 = r.f64();
  const double spacing = r.f64();
  std::vector<bool> mask(total);
  for (std::uint32_t l = 0; l < total; ++l) mask[l] = r.u32() != 0;
  Dataset ds;
  const ArrayGeometry regular = static_cast<ArrayFamily>(family) == ArrayFamily::kCircular
                                    ? make_circular_array(total, radius)
                                    : make_linear_array(total, spacing, x0);
  ds.array = with_active_mask(regular, mask);
  std::vector<double> hz(r.u32());
  r.f64s(hz);
  const double c = r.f64();
  ds.freqs = FrequencyGrid(std::move(hz), c);
  ds.control.role = PointRole::kControl;
  ds.control.points.resize(r.u32());
  for (Point2& p : ds.control.points) {
    p.x = r.f64();
    p.y = r.f64();
  }
  ds.listening_radius = r.f64();
  ds.lambda = r.f64();
  ds.seed = r.u64();
  if (ds.geometry_hash() != hash) throw FormatError(path.string() + ": geometry hash mismatch");
  const std::uint32_t n = r.u32();
  const Eigen::Index rows = 2 * static_cast<Eigen::Index>(ds.array.active_count());
  const Eigen::Index cols = static_cast<Eigen::Index>(ds.freqs.size());
  const Eigen::Index points = static_cast<Eigen::Index>(ds.control.size());
  ds.records.resize(n);
  for (DatasetRecord& rec : ds.records) {
    rec.source_id = r.u32();
    const std::uint32_t split = r.u32();
    if (split > 2) throw FormatError(path.string() + ": bad split tag");
    rec.split = static_cast<Split>(split);
    rec.position.x = r.f64();
    rec.position.y = r.f64();
    rec.tensor.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index k = 0; k < cols; ++k) rec.tensor(i, k) = r.f64();
    }
    rec.pressure.resize(points, cols);
    for (Eigen::Index i = 0; i < points; ++i) {
      for (Eigen::Index k = 0; k < cols; ++k) {
        const double re = r.f64();
        rec.pressure(i, k) = {re, r.f64()};
      }
    }
  }
  if (!r.at_end()) throw FormatError(path.string() + ": trailing bytes");
  return ds;
}

void write_record_csv(const std::filesystem::path& stem, const DatasetRecord& r) {
  std::filesystem::path tensor_path = stem;
  tensor_path += "_tensor.csv";
  std::filesystem::path pressure_path = stem;
  pressure_path += "_pressure.csv";
  std::ofstream t(tensor_path);
  if (!t) throw std::runtime_error("cannot open " + tensor_path.string() + " for writing");
  t << "row,frequency,value\n";
  for (Eigen::Index i = 0; i < r.tensor.rows(); ++i) {
    for (Eigen::Index k = 0; k < r.tensor.cols(); ++k) {
      t << i << ',' << k << ',' << format_double(r.tensor(i, k)) << '\n';
    }
  }
  std::ofstream p(pressure_path);
  if (!p) throw std::runtime_error("cannot open " + pressure_path.string() + " for writing");
  p << "point,frequency,re,im\n";
  for (Eigen::Index i = 0; i < r.pressure.rows(); ++i) {
    for (Eigen::Index k = 0; k < r.pressure.cols(); ++k) {
      p << i << ',' << k << ',' << format_double(r.pressure(i, k).real()) << ','
        << format_double(r.pressure(i, k).imag()) << '\n';
    }
  }
  if (!t || !p) throw std::runtime_error("failed writing record CSV for " + stem.string());
}

}  // namespace sfs
