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
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sfs/bessel.hpp"

namespace sfs {
namespace {

struct OracleRow {
  int m;
  double x;
  double j;
  double y;
};

// 500 rows of J_m(x), Y_m(x) for m in [0, 60], x in [1e-3, 100], computed with
// arbitrary-precision series by tools/gen_bessel_oracle.py.
std::vector<OracleRow> load_oracle() {
  std::ifstream in(std::string(SFS_FIXTURE_DIR) + "/bessel_oracle.csv");
  std::vector<OracleRow> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream s(line);
    OracleRow r{};
    s >> r.m >> r.x >> r.j >> r.y;
    rows.push_back(r);
  }
  return rows;
}

TEST(Hankel, MatchesOracleFixture) {
  const std::vector<OracleRow> rows = load_oracle();
  ASSERT_EQ(rows.size(), 500u);
  for (const OracleRow& r : rows) {
    const Complex expected{r.j, -r.y};
    const Complex got = hankel2(r.m, r.x);
    EXPECT_LE(std::abs(got - expected), 1e-10 * std::abs(expected)) << "m=" << r.m << " x=" << r.x;
  }
}

TEST(Hankel, SpecExamples) {
  const Complex h0 = hankel2(0, 1.0);
  EXPECT_NEAR(h0.real(), 0.7651976866, 1e-10);
  EXPECT_NEAR(h0.imag(), -0.0882569642, 1e-10);
  const Complex h1 = hankel2(1, 2.0);
  EXPECT_NEAR(h1.real(), 0.5767248078, 1e-10);
  EXPECT_NEAR(h1.imag(), 0.1070324315, 1e-10);
  const Complex hm1 = hankel2(-1, 2.0);
  EXPECT_NEAR(hm1.real(), -0.5767248078, 1e-10);
  EXPECT_NEAR(hm1.imag(), -0.1070324315, 1e-10);
}

TEST(Hankel, WronskianAndRecurrence) {
  for (double x : {1e-3, 0.05, 0.7, 1.0, 3.3, 10.0, 37.5, 59.0, 61.0, 100.0}) {
    const int n = x < 0.01 ? 40 : 60;
    const BesselSequence s = bessel_jy(n, x);
    for (int m = 0; m < n; ++m) {
      const double w = s.j[m + 1] * s.y[m] - s.j[m] * s.y[m + 1];
      EXPECT_NEAR(w, 2.0 / (kPi * x), 1e-9 * 2.0 / (kPi * x)) << "m=" << m << " x=" << x;
    }
    const std::vector<Complex> h = hankel2_orders(n, x);
    for (int m = 1; m < n; ++m) {
      const Complex lhs = h[m - 1] + h[m + 1];
      const Complex rhs = 2.0 * m / x * h[m];
      EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::abs(rhs)) << "m=" << m << " x=" << x;
    }
  }
}

TEST(Hankel, OrdersAgreeWithSingleEvaluation) {
  const std::vector<Complex> h = hankel2_orders(20, 4.2);
  for (int m = 0; m <= 20; ++m) {
    EXPECT_LE(std::abs(h[m] - hankel2(m, 4.2)), 1e-13 * std::abs(h[m])) << "m=" << m;
  }
  EXPECT_LE(std::abs(hankel2_0(4.2) - h[0]), 1e-13 * std::abs(h[0]));
}

TEST(Hankel, DomainAndOverflowErrors) {
  EXPECT_THROW(hankel2(0, 0.0), SingularityError);
  EXPECT_THROW(hankel2(3, -1.0), SingularityError);
  EXPECT_THROW(hankel2(kMaxBesselOrder + 1, 1.0), std::invalid_argument);
  EXPECT_THROW(hankel2(120, 1e-3), std::overflow_error);
}

}  // namespace
}  // namespace sfs
