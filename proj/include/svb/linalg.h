// include/svb/linalg.h

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

#ifndef SVB_LINALG_H_
#define SVB_LINALG_H_

#include <span>

#include "svb/matrix.h"

namespace svb {

struct SymEigResult {
  Vector values;   // descending
  Matrix vectors;  // column i pairs with values[i]
};

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Each eigenvector is signed so its largest-magnitude component is
/// positive. Throws InvalidInput if `m` is not symmetric within 1e-8 and
/// NumericError if 100 sweeps do not bring the off-diagonal norm below
/// 1e-12 relative to the Frobenius norm.
SymEigResult SymEig(const Matrix& m);

/// Cholesky factorization a = L L^T of a symmetric positive definite matrix.
class Cholesky {
 public:
  /// Throws NumericError naming the first non-positive pivot.
  explicit Cholesky(const Matrix& a);

  std::size_t dim() const { return lower_.rows(); }
  const Matrix& lower() const { return lower_; }
  double LogDet() const { return log_det_; }

  Vector Solve(std::span<const double> b) const;
  Matrix Solve(const Matrix& b) const;
  /// L^{-1} b
  Vector SolveLower(std::span<const double> b) const;
  /// b^T a^{-1} b
  double QuadraticForm(std::span<const double> b) const;
  Matrix Inverse() const;

 private:
  Matrix lower_;
  double log_det_ = 0.0;
};

struct CholSolveResult {
  Matrix solution;
  double log_det = 0.0;
};

/// Solves a x = b for SPD a; also returns ln det(a).
CholSolveResult CholSolve(const Matrix& a, const Matrix& b);

/// Keeps the PSD part of a symmetric matrix: eigenvalues below `floor` are
/// raised to `floor`. Returns the number of eigenvalues that were changed.
int ClipEigenvalues(Matrix* m, double floor);

}  // namespace svb

#endif  // SVB_LINALG_H_
