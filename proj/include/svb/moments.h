// include/svb/moments.h

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

#ifndef SVB_MOMENTS_H_
#define SVB_MOMENTS_H_

#include <span>
#include <vector>

#include "svb/matrix.h"

namespace svb {

/// Population (divide-by-N) moments of a set of vectors.
struct MomentSummary {
  Vector mean;
  Matrix covariance;
  Vector skewness;
  Vector excess_kurtosis;
  // Dimensions with zero variance; their skewness and kurtosis are 0.
  std::vector<bool> degenerate;

  bool AnyDegenerate() const;
};

/// skew = m3 / m2^1.5, kurt = m4 / m2^2 - 3 per dimension. Needs at least
/// two samples of equal dimension.
MomentSummary Moments(std::span<const Vector> samples);

/// Per-dimension moments only (no covariance); same conventions as Moments().
MomentSummary MarginalMoments(std::span<const Vector> samples);

/// Mean and population covariance.
void MeanAndCovariance(std::span<const Vector> samples, Vector* mean,
                       Matrix* covariance);

}  // namespace svb

#endif  // SVB_MOMENTS_H_
