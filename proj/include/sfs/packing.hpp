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

#ifndef SFS_PACKING_HPP_
#define SFS_PACKING_HPP_

#include <Eigen/Dense>

#include "sfs/types.hpp"

namespace sfs {

// (2L) x K real tensor: rows 0..L-1 hold Re(D), rows L..2L-1 hold Im(D).
using PackedTensor = Eigen::MatrixXd;

PackedTensor pack_driving(const ComplexMatrix& d);

// Entry (l, k) = T(l, k) + j T(L + l, k). Throws std::invalid_argument for an
// odd row count.
ComplexMatrix unpack_driving(const PackedTensor& t);

}  // namespace sfs

#endif  // SFS_PACKING_HPP_
