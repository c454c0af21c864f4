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

#ifndef SFS_DATASETS_HPP_
#define SFS_DATASETS_HPP_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfs/acoustics.hpp"
#include "sfs/geometry.hpp"
#include "sfs/packing.hpp"

namespace sfs {

class GenerationError : public std::runtime_error {
 public:
  explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

enum class Split : std::uint32_t { kTrain = 0, kVal = 1, kTest = 2 };

const char* to_string(Split s);

struct SourceSplit {
  std::vector<Source> train;
  std::vector<Source> val;
  std::vector<Source> test;
  std::uint64_t seed = 0;

  std::size_t size() const { return train.size() + val.size() + test.size(); }
  // Throws GenerationError if any two sources share coordinates.
  void check_disjoint() const;
};

struct CircularProtocol {
  std::size_t n_radii = 20;
  std::size_t n_angles = 128;
  double radius_min = 1.5;
  double radius_max = 3.5;
  double test_shift = 0.05;
  std::size_t n_val = 512;
  // 0 keeps one shifted test source per train/val source; otherwise a seeded
  // subset of that many is kept.
  std::size_t n_test = 0;
};

// n_radii seeded-uniform radii, n_angles equispaced angles on each circle;
// n_val sources drawn for validation, the rest train; test sources are the
// train/val sources moved radially outward by test_shift.
SourceSplit gen_sources_circular(const CircularProtocol& p, std::uint64_t seed);

struct LinearProtocol {
  std::size_t n_train = 2000;
  std::size_t n_val = 500;
  std::size_t n_test = 2500;
  Rectangle region;
  double test_shift = 0.08;
};

// Region on the far side of a linear array at x0 from its listening area.
Rectangle default_linear_source_region(double x0);

// Seeded-uniform train/val positions in the region; test sources are the
// first n_test train/val sources shifted by test_shift along +x (away from
// the array). n_test may not exceed n_train + n_val.
SourceSplit gen_sources_linear(const LinearProtocol& p, std::uint64_t seed);

// Throws GenerationError if a source lies inside the area or, for circular
// arrays, not outside the array circle.
void check_sources_outside(const SourceSplit& split, const ListeningArea& area,
                           const ArrayGeometry& array);

struct DatasetRecord {
  std::uint32_t source_id = 0;
  Split split = Split::kTrain;
  Point2 position;
  PackedTensor tensor;     // (2 L_active) x K
  ComplexMatrix pressure;  // I x K ground truth at the control points
};

struct Dataset {
  ArrayGeometry array;
  FrequencyGrid freqs;
  PointSet control;
  double listening_radius = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  std::vector<DatasetRecord> records;

  // SHA-256 of the array layout, activity mask, control points and
  // frequency grid.
  std::string geometry_hash() const;
  std::vector<const DatasetRecord*> select(Split s) const;
};

// MR driving signals of the (decimated) array for every source, packed, and
// ground-truth pressures A(w_k) g(r_i | r_s). Records are ordered by source
// id: train, then val, then test.
Dataset build_dataset(const ArrayGeometry& array, const SourceSplit& split,
                      const PointSet& control, const FrequencyGrid& freqs,
                      double listening_radius, double lambda);

// SFSX: magic, version, header block, record count, fixed-size records.
void write_dataset(const std::filesystem::path& path, const Dataset& ds);
Dataset read_dataset(const std::filesystem::path& path);

// Columns row,frequency,value for the tensor and point,frequency,re,im for
// the pressures, written to `<stem>_tensor.csv` and `<stem>_pressure.csv`.
void write_record_csv(const std::filesystem::path& stem, const DatasetRecord& r);

}  // namespace sfs

#endif  // SFS_DATASETS_HPP_
