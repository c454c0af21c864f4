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

#include "sfs/packing.hpp"

namespace sfs {

PackedTensor pack_driving(const ComplexMatrix& d) {
  if (!d.allFinite()) throw std::invalid_argument("pack_driving: non-finite entry");
  const Eigen::Index l = d.rows();
  PackedTensor t(2 * l, d.cols());
  t.topRows(l) = d.real();
  t.bottomRows(l) = d.imag();
  return t;
}

ComplexMatrix unpack_driving(const PackedTensor& t) {
  if (t.rows() % 2 != 0) throw std::invalid_argument("unpack_driving: odd row count");
  const Eigen::Index l = t.rows() / 2;
  ComplexMatrix d(l, t.cols());
  d.real() = t.topRows(l);
  d.imag() = t.bottomRows(l);
  return d;
}

}  // namespace sfs
