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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "sfs/io.hpp"
#include "sfs/renderers.hpp"
#include "test_util.hpp"

namespace sfs {
namespace {

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  const test::TempDir dir("sha");
  {
    std::ofstream out(dir.path() / "f", std::ios::binary);
    out << "abc";
  }
  EXPECT_EQ(sha256_file(dir.path() / "f"), sha256_hex("abc"));
}

TEST(FormatDouble, ShortestRoundTrip) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = n(rng);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.25), "0.25");
  EXPECT_EQ(format_double(-3.0), "-3");
}

TEST(DrivingFile, RoundTripWithProvenance) {
  const test::TempDir dir("driving");
  std::mt19937_64 rng(2);
  const DrivingSignals d{test::random_complex(8, 15, rng), Provenance::kPm};
  write_driving(dir.path() / "d.sfsd", d);
  const DrivingSignals back = read_driving(dir.path() / "d.sfsd");
  EXPECT_EQ(back.values, d.values);
  EXPECT_EQ(back.provenance, Provenance::kPm);
  const std::string bytes = test::read_bytes(dir.path() / "d.sfsd");
  EXPECT_EQ(bytes.substr(0, 4), "SFSD");
  EXPECT_EQ(bytes.size(), 4u + 3 * 4 + 8 * 15 * 16 + 4);

  write_driving_csv(dir.path() / "d.csv", d);
  const std::string csv = test::read_bytes(dir.path() / "d.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 8 * 15);

  {
    std::ofstream out(dir.path() / "bad.sfsd", std::ios::binary);
    out << "SFSX" << bytes.substr(4);
  }
  EXPECT_THROW(read_driving(dir.path() / "bad.sfsd"), FormatError);
  {
    std::ofstream out(dir.path() / "short.sfsd", std::ios::binary);
    out << bytes.substr(0, 40);
  }
  EXPECT_THROW(read_driving(dir.path() / "short.sfsd"), FormatError);
}

TEST(FieldExport, CsvAndPgm) {
  const test::TempDir dir("field");
  const PointSet grid = sample_listening_grid({Rectangle{0, 0.04, 0, 0.02}, 0.02});
  ASSERT_EQ(grid.size(), 6u);
  ComplexVector f(6);
  for (int i = 0; i < 6; ++i) f(i) = {static_cast<double>(i), -1.0};
  write_field_csv(dir.path() / "f.csv", grid, f);
  const std::string csv = test::read_bytes(dir.path() / "f.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,y,re,im");
  EXPECT_NE(csv.find("\n0.04,0.02,5,-1\n"), std::string::npos);

  const std::vector<double> v{0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
  write_field_pgm(dir.path() / "f.pgm", grid, v, 0.02);
  const std::string pgm = test::read_bytes(dir.path() / "f.pgm");
  const std::string header = "P5\n3 2\n255\n";
  ASSERT_EQ(pgm.size(), header.size() + 6);
  EXPECT_EQ(pgm.substr(0, header.size()), header);
  // Top row holds y = 0.02 (points 3..5), values normalized to [0, 255].
  EXPECT_EQ(static_cast<unsigned char>(pgm[header.size()]), 153);
  EXPECT_EQ(static_cast<unsigned char>(pgm[header.size() + 2]), 255);
  EXPECT_EQ(static_cast<unsigned char>(pgm[header.size() + 3]), 0);
  EXPECT_THROW(write_field_pgm(dir.path() / "g.pgm", grid, std::span(v).first(3), 0.02),
               std::invalid_argument);
}

}  // namespace
}  // namespace sfs
