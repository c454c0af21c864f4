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

#include "sfs/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

namespace sfs {

static_assert(std::endian::native == std::endian::little, "binary formats assume little endian");

namespace {

constexpr std::uint32_t kDrivingVersion = 1;

std::ofstream open_text(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void finish_text(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

BinaryWriter::BinaryWriter(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
}

void BinaryWriter::magic(std::string_view tag) {
  out_.write(tag.data(), static_cast<std::streamsize>(tag.size()));
}

void BinaryWriter::text(std::string_view bytes) { magic(bytes); }

void BinaryWriter::u32(std::uint32_t v) {
  out_.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void BinaryWriter::u64(std::uint64_t v) {
  out_.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void BinaryWriter::f64(double v) { out_.write(reinterpret_cast<const char*>(&v), sizeof v); }

void BinaryWriter::f64s(std::span<const double> v) {
  out_.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size_bytes()));
}

void BinaryWriter::close() {
  out_.close();
  if (!out_) throw std::runtime_error("failed writing " + path_.string());
}

BinaryReader::BinaryReader(const std::filesystem::path& path)
    : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw std::runtime_error("cannot open " + path.string());
}

void BinaryReader::read(void* dst, std::size_t n) {
  in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in_.gcount()) != n) {
    throw FormatError(path_.string() + ": unexpected end of file");
  }
}

void BinaryReader::expect_magic(std::string_view tag) {
  std::string got(tag.size(), '\0');
  read(got.data(), got.size());
  if (got != tag) {
    throw FormatError(path_.string() + ": expected magic " + std::string(tag));
  }
}

std::string BinaryReader::text(std::size_t n) {
  std::string out(n, '\0');
  read(out.data(), n);
  return out;
}

std::uint32_t BinaryReader::u32() {
  std::uint32_t v = 0;
  read(&v, sizeof v);
  return v;
}

std::uint64_t BinaryReader::u64() {
  std::uint64_t v = 0;
  read(&v, sizeof v);
  return v;
}

double BinaryReader::f64() {
  double v = 0;
  read(&v, sizeof v);
  return v;
}

void BinaryReader::f64s(std::span<double> v) { read(v.data(), v.size_bytes()); }

bool BinaryReader::at_end() { return in_.peek() == std::ifstream::traits_type::eof(); }

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_driving(const std::filesystem::path& path, const DrivingSignals& d) {
  BinaryWriter w(path);
  w.magic("SFSD");
  w.u32(kDrivingVersion);
  w.u32(static_cast<std::uint32_t>(d.values.rows()));
  w.u32(static_cast<std::uint32_t>(d.values.cols()));
  for (Eigen::Index l = 0; l < d.values.rows(); ++l) {
    for (Eigen::Index k = 0; k < d.values.cols(); ++k) {
      w.f64(d.values(l, k).real());
      w.f64(d.values(l, k).imag());
    }
  }
  w.u32(static_cast<std::uint32_t>(d.provenance));
  w.close();
}

DrivingSignals read_driving(const std::filesystem::path& path) {
  BinaryReader r(path);
  r.expect_magic("SFSD");
  if (r.u32() != kDrivingVersion) throw FormatError(path.string() + ": unsupported version");
  const std::uint32_t l = r.u32();
  const std::uint32_t k = r.u32();
  DrivingSignals d;
  d.values.resize(l, k);
  for (std::uint32_t i = 0; i < l; ++i) {
    for (std::uint32_t j = 0; j < k; ++j) {
      const double re = r.f64();
      d.values(i, j) = {re, r.f64()};
    }
  }
  const std::uint32_t prov = r.u32();
  if (prov > static_cast<std::uint32_t>(Provenance::kCnn)) {
    throw FormatError(path.string() + ": bad provenance tag");
  }
  d.provenance = static_cast<Provenance>(prov);
  return d;
}

void write_driving_csv(const std::filesystem::path& path, const DrivingSignals& d) {
  std::ofstream out = open_text(path);
  out << "speaker,frequency,re,im\n";
  for (Eigen::Index l = 0; l < d.values.rows(); ++l) {
    for (Eigen::Index k = 0; k < d.values.cols(); ++k) {
      out << l << ',' << k << ',' << format_double(d.values(l, k).real()) << ','
          << format_double(d.values(l, k).imag()) << '\n';
    }
  }
  finish_text(out, path);
}

void write_points_csv(const std::filesystem::path& path, const PointSet& points) {
  std::ofstream out = open_text(path);
  out << "x,y\n";
  for (const Point2& p : points.points) {
    out << format_double(p.x) << ',' << format_double(p.y) << '\n';
  }
  finish_text(out, path);
}

void write_field_csv(const std::filesystem::path& path, const PointSet& points,
                     const ComplexVector& field) {
  if (static_cast<std::size_t>(field.size()) != points.size()) {
    throw std::invalid_argument("write_field_csv: field length differs from point count");
  }
  std::ofstream out = open_text(path);
  out << "x,y,re,im\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Complex v = field(static_cast<Eigen::Index>(i));
    out << format_double(points.points[i].x) << ',' << format_double(points.points[i].y) << ','
        << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
  }
  finish_text(out, path);
}

void write_field_pgm(const std::filesystem::path& path, const PointSet& points,
                     std::span<const double> values, double spacing) {
  if (values.size() != points.size() || points.size() == 0) {
    throw std::invalid_argument("write_field_pgm: need one value per point");
  }
  if (!(spacing > 0.0)) throw std::invalid_argument("write_field_pgm: spacing must be > 0");
  double xmin = points.points[0].x;
  double ymax = points.points[0].y;
  for (const Point2& p : points.points) {
    xmin = std::min(xmin, p.x);
    ymax = std::max(ymax, p.y);
  }
  const auto [vmin_it, vmax_it] = std::minmax_element(values.begin(), values.end());
  const double vmin = *vmin_it;
  const double range = *vmax_it - vmin;

  std::vector<std::pair<long, long>> cells(points.size());
  long width = 0;
  long height = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const long cx = std::lround((points.points[i].x - xmin) / spacing);
    const long cy = std::lround((ymax - points.points[i].y) / spacing);
    cells[i] = {cx, cy};
    width = std::max(width, cx + 1);
    height = std::max(height, cy + 1);
  }
  std::vector<unsigned char> pixels(static_cast<std::size_t>(width * height), 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double t = range > 0.0 ? (values[i] - vmin) / range : 0.0;
    pixels[static_cast<std::size_t>(cells[i].second * width + cells[i].first)] =
        static_cast<unsigned char>(std::lround(255.0 * t));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
  finish_text(out, path);
}

}  // namespace sfs
