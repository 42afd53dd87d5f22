// include/svb/linear_norm.h

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

#ifndef SVB_LINEAR_NORM_H_
#define SVB_LINEAR_NORM_H_

#include <span>

#include "svb/dataio.h"
#include "svb/matrix.h"

namespace svb {

/// Projection onto the top-k principal axes of the total covariance.
struct PcaModel {
  Vector mean;
  Matrix projection;  // k x d, orthonormal rows
  Vector eigenvalues; // all d eigenvalues of the total covariance, descending

  std::size_t input_dim() const { return mean.size(); }
  std::size_t output_dim() const { return projection.rows(); }
  bool operator==(const PcaModel&) const = default;
};

/// Fisher discriminant projection: whitening of the (ridge-regularized)
/// within-class scatter followed by the top-k eigenvectors of the whitened
/// between-class scatter.
struct LdaModel {
  Vector mean;
  Matrix projection;   // k x d
  Vector eigenvalues;  // whitened between-class eigenvalues, descending
  double ridge = 0.0;  // added to the within-class scatter diagonal
  // Set when the between-class scatter vanishes (all class means equal).
  bool degenerate = false;

  std::size_t input_dim() const { return mean.size(); }
  std::size_t output_dim() const { return projection.rows(); }
  bool operator==(const LdaModel&) const = default;
};

PcaModel FitPca(const EmbeddingSet& set, std::size_t k);
LdaModel FitLda(const EmbeddingSet& set, std::size_t k);

/// projection * (x - mean)
Vector ApplyProjection(const Vector& mean, const Matrix& projection,
                       std::span<const double> x);

EmbeddingSet Transform(const PcaModel& model, const EmbeddingSet& set);
EmbeddingSet Transform(const LdaModel& model, const EmbeddingSet& set);

/// Scales every vector to length sqrt(dim).
EmbeddingSet LengthNormalize(const EmbeddingSet& set);

}  // namespace svb

#endif  // SVB_LINEAR_NORM_H_
