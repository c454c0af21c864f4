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

#ifndef SFS_IO_HPP_
#define SFS_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sfs/geometry.hpp"
#include "sfs/renderers.hpp"

namespace sfs {

class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Little-endian fixed-width records.
class BinaryWriter {
 public:
  explicit BinaryWriter(const std::filesystem::path& path);

  void magic(std::string_view tag);
  void text(std::string_view bytes);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f64(double v);
  void f64s(std::span<const double> v);
  // Throws std::runtime_error if any write failed.
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(const std::filesystem::path& path);

  // Throws FormatError when the next bytes are not `tag`.
  void expect_magic(std::string_view tag);
  std::string text(std::size_t n);
  std::uint32_t u32();
  std::uint64_t u64();
  double f64();
  void f64s(std::span<double> v);
  bool at_end();

 private:
  void read(void* dst, std::size_t n);

  std::filesystem::path path_;
  std::ifstream in_;
};

// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

// Shortest decimal text that round-trips the double.
std::string format_double(double v);

// SFSD: magic, version, L, K, row-major interleaved (re, im), provenance.
void write_driving(const std::filesystem::path& path, const DrivingSignals& d);
DrivingSignals read_driving(const std::filesystem::path& path);
// Columns speaker,frequency,re,im.
void write_driving_csv(const std::filesystem::path& path, const DrivingSignals& d);

// Columns x,y.
void write_points_csv(const std::filesystem::path& path, const PointSet& points);
// Columns x,y,re,im.
void write_field_csv(const std::filesystem::path& path, const PointSet& points,
                     const ComplexVector& field);

// 8-bit binary PGM of values sampled on a lattice with the given spacing.
// Values are mapped linearly from [min, max] to [0, 255]; lattice cells
// without a point stay black.
void write_field_pgm(const std::filesystem::path& path, const PointSet& points,
                     std::span<const double> values, double spacing);

}  // namespace sfs

#endif  // SFS_IO_HPP_
