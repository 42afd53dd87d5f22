// include/svb/adam.h

// Copyright 2026  The svb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SVB_ADAM_H_
#define SVB_ADAM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "svb/matrix.h"

namespace svb {

struct AdamHyperParams {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First/second moment accumulators, one buffer per parameter buffer.
struct AdamState {
  AdamHyperParams hyper;
  std::uint64_t step = 0;
  std::vector<Vector> first_moment;
  std::vector<Vector> second_moment;
};

/// Fresh state with zero accumulators shaped like `params`.
AdamState MakeAdamState(std::span<const std::span<double>> params,
                        const AdamHyperParams& hyper);

/// One bias-corrected Adam update applied in place. Throws InvalidInput if
/// the shapes of params, grads and state disagree.
void AdamStep(std::span<const std::span<double>> params,
              std::span<const std::span<const double>> grads, AdamState* state);

}  // namespace svb

#endif  // SVB_ADAM_H_
