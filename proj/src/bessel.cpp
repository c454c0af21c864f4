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

#include "sfs/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sfs {
namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kAsymptoticThreshold = 60.0;
constexpr double kRescaleAbove = 1e250;
constexpr double kRescaleBy = 1e-250;

void check_argument(int max_order, double x) {
  if (!(x > 0.0)) {
    throw SingularityError("Bessel/Hankel evaluation needs x > 0, got " + std::to_string(x));
  }
  if (max_order < 0 || max_order > kMaxBesselOrder) {
    throw std::invalid_argument("Bessel order out of range: " + std::to_string(max_order));
  }
}

// Miller start index: far enough above both the order and the turning point
// x that the neglected minimal solution is below double precision.
int miller_start(int max_order, double x) {
  const double top = std::max(static_cast<double>(max_order), x);
  int n = static_cast<int>(top + 20.0 + std::sqrt(40.0 * (top + 1.0)));
  return n + (n % 2);
}

// J_0..J_start(x) with J_0 + 2 sum J_2k = 1, where start is the Miller start
// index for max_order. Entries near the top are inaccurate but negligible.
std::vector<double> miller_j(int max_order, double x) {
  const int start = miller_start(max_order, x);
  std::vector<double> f(static_cast<std::size_t>(start) + 2, 0.0);
  f[start] = 1e-30;
  double norm = 0.0;
  for (int k = start; k >= 1; --k) {
    f[k - 1] = (2.0 * k / x) * f[k] - f[k + 1];
    if (std::abs(f[k - 1]) > kRescaleAbove) {
      for (int i = k - 1; i <= start; ++i) f[i] *= kRescaleBy;
      norm *= kRescaleBy;
    }
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * f[k - 1];
  }
  norm += f[0];
  f.pop_back();
  for (double& v : f) v /= norm;
  return f;
}

// Neumann series for Y_0 and its term-by-term derivative for Y_1:
//   Y_0 = (2/pi)[(ln(x/2)+gamma) J_0 - 2 sum_{k>=1} (-1)^k J_2k / k]
//   Y_1 = (2/pi)[(ln(x/2)+gamma) J_1 - J_0/x + sum_{k>=1} (-1)^k (J_2k-1 - J_2k+1)/k]
void neumann_y01(const std::vector<double>& j, double x, double& y0, double& y1) {
  const double lead = std::log(0.5 * x) + kEulerGamma;
  double s0 = 0.0;
  double s1 = 0.0;
  const int kmax = static_cast<int>(j.size() - 2) / 2;
  for (int k = 1; k <= kmax; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    s0 += sign * j[2 * k] / k;
    s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k;
  }
  y0 = (2.0 / kPi) * (lead * j[0] - 2.0 * s0);
  y1 = (2.0 / kPi) * (lead * j[1] - j[0] / x + s1);
}

// Hankel asymptotic expansion of H^(2)_nu(x) for large x:
//   sqrt(2/(pi x)) e^{-j(x - nu pi/2 - pi/4)} sum_k (-j)^k a_k(nu) / x^k.
Complex hankel2_asymptotic(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  Complex sum = 1.0;
  Complex term = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= Complex(0.0, -1.0) * ((mu - odd * odd) / (k * 8.0 * x));
    const double size = std::abs(term);
    if (size >= last) break;  // asymptotic series started to diverge
    sum += term;
    last = size;
    if (size < 1e-18 * std::abs(sum)) break;
  }
  const double phase = x - 0.5 * nu * kPi - 0.25 * kPi;
  return std::sqrt(2.0 / (kPi * x)) * std::polar(1.0, -phase) * sum;
}

}  // namespace

BesselSequence bessel_jy(int max_order, double x) {
  check_argument(max_order, x);
  const int count = std::max(max_order + 1, 2);
  BesselSequence out;
  std::vector<double> j = miller_j(count - 1, x);
  double y0 = 0.0;
  double y1 = 0.0;
  if (x > kAsymptoticThreshold) {
    y0 = -hankel2_asymptotic(0, x).imag();
    y1 = -hankel2_asymptotic(1, x).imag();
  } else {
    neumann_y01(j, x, y0, y1);
  }
  out.j.assign(j.begin(), j.begin() + count);
  out.y.resize(static_cast<std::size_t>(count));
  out.y[0] = y0;
  out.y[1] = y1;
  for (int m = 1; m + 1 < count; ++m) {
    out.y[m + 1] = (2.0 * m / x) * out.y[m] - out.y[m - 1];
    if (!std::isfinite(out.y[m + 1])) {
      throw std::overflow_error("Y_" + std::to_string(m + 1) + "(" + std::to_string(x) +
                                ") overflows double precision");
    }
  }
  out.j.resize(static_cast<std::size_t>(max_order) + 1);
  out.y.resize(static_cast<std::size_t>(max_order) + 1);
  return out;
}

std::vector<Complex> hankel2_orders(int max_order, double x) {
  const BesselSequence s = bessel_jy(max_order, x);
  std::vector<Complex> h(s.j.size());
  for (std::size_t m = 0; m < h.size(); ++m) h[m] = {s.j[m], -s.y[m]};
  return h;
}

Complex hankel2(int m, double x) {
  const int order = std::abs(m);
  if (order > kMaxBesselOrder) {
    throw std::invalid_argument("hankel2: |m| exceeds " + std::to_string(kMaxBesselOrder));
  }
  const Complex h = hankel2_orders(order, x)[static_cast<std::size_t>(order)];
  return (m < 0 && order % 2 == 1) ? -h : h;
}

Complex hankel2_0(double x) {
  check_argument(0, x);
  if (x > kAsymptoticThreshold) return hankel2_asymptotic(0, x);
  const std::vector<double> j = miller_j(1, x);
  double y0 = 0.0;
  double y1 = 0.0;
  neumann_y01(j, x, y0, y1);
  return {j[0], -y0};
}

}  // namespace sfs
