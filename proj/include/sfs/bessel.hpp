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

#ifndef SFS_BESSEL_HPP_
#define SFS_BESSEL_HPP_

#include <vector>

#include "sfs/types.hpp"

namespace sfs {

// Largest |m| accepted by the integer-order routines below.
inline constexpr int kMaxBesselOrder = 128;

// J_0..J_n and Y_0..Y_n at one argument.
struct BesselSequence {
  std::vector<double> j;
  std::vector<double> y;
};

// Integer-order Bessel functions of the first and second kind, m = 0..max_order.
//
// J comes from Miller's downward recurrence normalised with
// J_0 + 2 sum J_2k = 1. Y_0 and Y_1 come from the Neumann series over the same
// J sequence for x <= 60 and from the Hankel asymptotic expansion above; higher
// orders follow by upward recurrence, which is stable for Y.
//
// Throws SingularityError for x <= 0, std::invalid_argument for orders outside
// [0, kMaxBesselOrder] and std::overflow_error when Y_m leaves the double range
// (m >> x).
BesselSequence bessel_jy(int max_order, double x);

// H^(2)_m(x) = J_m(x) - j Y_m(x) for m = 0..max_order.
std::vector<Complex> hankel2_orders(int max_order, double x);

// H^(2)_m(x) for any integer |m| <= kMaxBesselOrder, using
// H^(2)_{-m} = (-1)^m H^(2)_m.
Complex hankel2(int m, double x);

// Order-zero fast path used by the Green's function.
Complex hankel2_0(double x);

}  // namespace sfs

#endif  // SFS_BESSEL_HPP_
