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

#ifndef SFS_EVALUATION_HPP_
#define SFS_EVALUATION_HPP_

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sfs/renderers.hpp"

namespace sfs {

inline constexpr double kNreFloorDb = -300.0;

// 10 log10(sum |p_hat - p|^2 / sum |p|^2), never below kNreFloorDb.
// Throws std::invalid_argument on size mismatch or zero reference energy.
double nre(const ComplexVector& p_hat, const ComplexVector& p);
double nre(const FieldGrid& p_hat, const FieldGrid& p);

// (|p| - min) / (max - min); a constant field maps to zeros.
std::vector<double> normalize_magnitude(const ComplexVector& p);

// Single-window SSIM of two grids normalised to [0, 1] with whole-grid
// statistics, c1 = (0.01)^2, c2 = (0.03)^2.
double ssim_global(std::span<const double> a, std::span<const double> b);

enum class Method { kMr = 0, kPm = 1, kCnn = 2 };
inline constexpr std::array<Method, 3> kAllMethods = {Method::kMr, Method::kPm, Method::kCnn};

const char* to_string(Method m);
// Throws std::invalid_argument for unknown names.
Method parse_method(const std::string& name);

enum class SweepAxis { kFrequencyHz, kRadiusM };

// Per-source metric values of one method: one row per test source, one
// column per frequency. NaN marks "not computed".
using SourceMetrics = Eigen::MatrixXd;

struct MetricSeries {
  SweepAxis axis = SweepAxis::kFrequencyHz;
  std::vector<double> axis_values;
  std::vector<Method> methods;
  // means[m][i] is the mean over count[i] sources of method m.
  std::vector<std::vector<double>> means;
  std::vector<std::size_t> counts;

  // Throws std::logic_error when lengths disagree.
  void validate() const;
};

// Mean over sources for every frequency column, summed in source index order.
MetricSeries frequency_sweep(std::span<const double> freqs_hz, std::span<const Method> methods,
                             std::span<const SourceMetrics> per_method);

// Bins sources by radius into `bin_edges.size() - 1` half-open bins
// [e_i, e_{i+1}) (the last bin is closed) and averages column `freq_index`.
// Empty bins appear with count 0 and NaN means.
MetricSeries radius_sweep(std::span<const double> source_radii, std::span<const double> bin_edges,
                          std::size_t freq_index, std::span<const Method> methods,
                          std::span<const SourceMetrics> per_method);

// Columns axis_value,mr,pm,cnn,count; methods not in the series are left
// empty and NaN means are written as "nan".
void write_metric_csv(const std::filesystem::path& path, const MetricSeries& series);

}  // namespace sfs

#endif  // SFS_EVALUATION_HPP_
