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

#include "sfs/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "sfs/io.hpp"

namespace sfs {
namespace {

constexpr double kSsimC1 = 0.01 * 0.01;
constexpr double kSsimC2 = 0.03 * 0.03;

MetricSeries empty_series(SweepAxis axis, std::span<const Method> methods,
                          std::span<const SourceMetrics> per_method) {
  if (methods.size() != per_method.size()) {
    throw std::invalid_argument("sweep: one metric table per method");
  }
  MetricSeries s;
  s.axis = axis;
  s.methods.assign(methods.begin(), methods.end());
  s.means.resize(methods.size());
  return s;
}

}  // namespace

double nre(const ComplexVector& p_hat, const ComplexVector& p) {
  if (p_hat.size() != p.size()) throw std::invalid_argument("nre: size mismatch");
  const double ref = p.squaredNorm();
  if (!(ref > 0.0)) throw std::invalid_argument("nre: reference field has zero energy");
  const double err = (p_hat - p).squaredNorm();
  if (err == 0.0) return kNreFloorDb;
  return std::max(kNreFloorDb, 10.0 * std::log10(err / ref));
}

double nre(const FieldGrid& p_hat, const FieldGrid& p) { return nre(p_hat.pressure, p.pressure); }

std::vector<double> normalize_magnitude(const ComplexVector& p) {
  if (p.size() == 0) throw std::invalid_argument("normalize_magnitude: empty field");
  std::vector<double> mag(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) mag[static_cast<std::size_t>(i)] = std::abs(p(i));
  const auto [lo, hi] = std::minmax_element(mag.begin(), mag.end());
  const double min = *lo;
  const double range = *hi - min;
  for (double& v : mag) v = range > 0.0 ? (v - min) / range : 0.0;
  return mag;
}

double ssim_global(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("ssim: size mismatch");
  const auto n = static_cast<double>(a.size());
  double mu_a = 0.0;
  double mu_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mu_a += a[i];
    mu_b += b[i];
  }
  mu_a /= n;
  mu_b /= n;
  double var_a = 0.0;
  double var_b = 0.0;
  double cov = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    var_a += (a[i] - mu_a) * (a[i] - mu_a);
    var_b += (b[i] - mu_b) * (b[i] - mu_b);
    cov += (a[i] - mu_a) * (b[i] - mu_b);
  }
  var_a /= n;
  var_b /= n;
  cov /= n;
  const double num = (2.0 * mu_a * mu_b + kSsimC1) * (2.0 * cov + kSsimC2);
  const double den = (mu_a * mu_a + mu_b * mu_b + kSsimC1) * (var_a + var_b + kSsimC2);
  return num / den;
}

const char* to_string(Method m) {
  switch (m) {
    case Method::kMr:
      return "mr";
    case Method::kPm:
      return "pm";
    case Method::kCnn:
      return "cnn";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  for (Method m : kAllMethods) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown method '" + name + "' (expected mr, pm or cnn)");
}

void MetricSeries::validate() const {
  if (means.size() != methods.size()) throw std::logic_error("metric series: method count");
  if (counts.size() != axis_values.size()) throw std::logic_error("metric series: count length");
  for (const auto& m : means) {
    if (m.size() != axis_values.size()) throw std::logic_error("metric series: mean length");
  }
}

MetricSeries frequency_sweep(std::span<const double> freqs_hz, std::span<const Method> methods,
                             std::span<const SourceMetrics> per_method) {
  MetricSeries s = empty_series(SweepAxis::kFrequencyHz, methods, per_method);
  s.axis_values.assign(freqs_hz.begin(), freqs_hz.end());
  const Eigen::Index n_src = per_method.empty() ? 0 : per_method[0].rows();
  s.counts.assign(freqs_hz.size(), static_cast<std::size_t>(n_src));
  for (std::size_t m = 0; m < per_method.size(); ++m) {
    const SourceMetrics& t = per_method[m];
    if (t.rows() != n_src || static_cast<std::size_t>(t.cols()) != freqs_hz.size()) {
      throw std::invalid_argument("frequency_sweep: metric table shape mismatch");
    }
    for (Eigen::Index k = 0; k < t.cols(); ++k) {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < n_src; ++i) sum += t(i, k);
      s.means[m].push_back(n_src > 0 ? sum / static_cast<double>(n_src)
                                     : std::numeric_limits<double>::quiet_NaN());
    }
  }
  s.validate();
  return s;
}

MetricSeries radius_sweep(std::span<const double> source_radii, std::span<const double> bin_edges,
                          std::size_t freq_index, std::span<const Method> methods,
                          std::span<const SourceMetrics> per_method) {
  if (bin_edges.size() < 2 || !std::is_sorted(bin_edges.begin(), bin_edges.end())) {
    throw std::invalid_argument("radius_sweep: need at least two increasing bin edges");
  }
  MetricSeries s = empty_series(SweepAxis::kRadiusM, methods, per_method);
  const std::size_t n_bins = bin_edges.size() - 1;
  std::vector<int> bin(source_radii.size(), -1);
  for (std::size_t i = 0; i < source_radii.size(); ++i) {
    const double r = source_radii[i];
    for (std::size_t b = 0; b < n_bins; ++b) {
      const bool last = b + 1 == n_bins;
      if (r >= bin_edges[b] && (r < bin_edges[b + 1] || (last && r == bin_edges[b + 1]))) {
        bin[i] = static_cast<int>(b);
        break;
      }
    }
  }
  s.counts.assign(n_bins, 0);
  for (int b : bin) {
    if (b >= 0) ++s.counts[static_cast<std::size_t>(b)];
  }
  for (std::size_t b = 0; b < n_bins; ++b) {
    s.axis_values.push_back(0.5 * (bin_edges[b] + bin_edges[b + 1]));
  }
  for (std::size_t m = 0; m < per_method.size(); ++m) {
    const SourceMetrics& t = per_method[m];
    if (static_cast<std::size_t>(t.rows()) != source_radii.size() ||
        freq_index >= static_cast<std::size_t>(t.cols())) {
      throw std::invalid_argument("radius_sweep: metric table shape mismatch");
    }
    std::vector<double> sums(n_bins, 0.0);
    for (std::size_t i = 0; i < source_radii.size(); ++i) {
      if (bin[i] >= 0) {
        sums[static_cast<std::size_t>(bin[i])] +=
            t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(freq_index));
      }
    }
    for (std::size_t b = 0; b < n_bins; ++b) {
      s.means[m].push_back(s.counts[b] > 0 ? sums[b] / static_cast<double>(s.counts[b])
                                           : std::numeric_limits<double>::quiet_NaN());
    }
  }
  s.validate();
  return s;
}

void write_metric_csv(const std::filesystem::path& path, const MetricSeries& series) {
  series.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "axis_value,mr,pm,cnn,count\n";
  for (std::size_t i = 0; i < series.axis_values.size(); ++i) {
    out << format_double(series.axis_values[i]);
    for (Method m : kAllMethods) {
      out << ',';
      const auto it = std::find(series.methods.begin(), series.methods.end(), m);
      if (it == series.methods.end()) continue;
      const double v = series.means[static_cast<std::size_t>(it - series.methods.begin())][i];
      out << (std::isnan(v) ? std::string("nan") : format_double(v));
    }
    out << ',' << series.counts[i] << '\n';
  }
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace sfs
