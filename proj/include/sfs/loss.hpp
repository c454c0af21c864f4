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

#ifndef SFS_LOSS_HPP_
#define SFS_LOSS_HPP_

#include <span>

#include "sfs/types.hpp"

namespace sfs {

struct LossWeights {
  double lambda_abs = 25.0;
  double lambda_phase = 1.0;

  // Throws std::invalid_argument for negative or non-finite weights.
  void validate() const;
};

// Maps an angle to (-pi, pi].
double wrap_phase(double angle);

// Fixed propagation layer: column k of the result is g[k] * d.col(k), with
// d of size L x K and g[k] of size I x L.
ComplexMatrix predict_control_pressure(const ComplexMatrix& d, std::span<const ComplexMatrix> g);

// Mean over entries of
//   lambda_abs | |p_gt| - |p_pred| | + lambda_phase | wrap(arg p_gt - arg p_pred) |.
double pressure_loss(const ComplexMatrix& pred, const ComplexMatrix& gt, const LossWeights& w);

// Same loss plus its gradient with respect to the prediction, packed as
// dL/dRe(p) + j dL/dIm(p) so that dL = Re(sum conj(grad) dp). Entries with
// p_pred = 0 get a zero gradient.
double pressure_loss_gradient(const ComplexMatrix& pred, const ComplexMatrix& gt,
                              const LossWeights& w, ComplexMatrix& grad);

}  // namespace sfs

#endif  // SFS_LOSS_HPP_
