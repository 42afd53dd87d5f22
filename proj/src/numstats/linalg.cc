// src/numstats/linalg.cc

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

#include "svb/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "svb/errors.h"
#include "svb/kernels.h"

namespace svb {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTolerance = 1e-12;

double OffDiagonalNorm(const Matrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

void Rotate(Matrix* a, Matrix* v, std::size_t p, std::size_t q) {
  const double apq = (*a)(p, q);
  const double theta = 0.5 * ((*a)(q, q) - (*a)(p, p)) / apq;
  double t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
  if (theta < 0.0) t = -t;
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a->rows();
  for (std::size_t k = 0; k < n; ++k) {
    const double akp = (*a)(k, p), akq = (*a)(k, q);
    (*a)(k, p) = c * akp - s * akq;
    (*a)(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = (*a)(p, k), aqk = (*a)(q, k);
    (*a)(p, k) = c * apk - s * aqk;
    (*a)(q, k) = s * apk + c * aqk;
  }
  (*a)(p, q) = 0.0;
  (*a)(q, p) = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = (*v)(k, p), vkq = (*v)(k, q);
    (*v)(k, p) = c * vkp - s * vkq;
    (*v)(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

SymEigResult SymEig(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("SymEig: matrix is not square");
  if (!AllFinite(m.data())) throw InvalidInput("SymEig: non-finite entry");
  if (!IsSymmetric(m, 1e-8)) throw InvalidInput("SymEig: matrix is not symmetric");

  const std::size_t n = m.rows();
  Matrix a = Symmetrized(m);
  Matrix v = Matrix::Identity(n);
  const double scale = FrobeniusNorm(a);
  const double target = kOffDiagonalTolerance * (scale > 0.0 ? scale : 1.0);

  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (OffDiagonalNorm(a) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        if (std::fabs(a(p, q)) > 1e-300) Rotate(&a, &v, p, q);
  }
  if (sweep == kMaxSweeps && OffDiagonalNorm(a) > target)
    throw NumericError("SymEig: no convergence after " +
                       std::to_string(kMaxSweeps) + " sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&a](std::size_t i, std::size_t j) {
    return a(i, i) > a(j, j);
  });

  SymEigResult result{Vector(n), Matrix(n, n)};
  for (std::size_t out = 0; out < n; ++out) {
    const std::size_t src = order[out];
    result.values[out] = a(src, src);
    std::size_t argmax = 0;
    for (std::size_t k = 1; k < n; ++k)
      if (std::fabs(v(k, src)) > std::fabs(v(argmax, src))) argmax = k;
    const double sign = v(argmax, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < n; ++k) result.vectors(k, out) = sign * v(k, src);
  }
  return result;
}

Cholesky::Cholesky(const Matrix& a) : lower_(a.rows(), a.cols()) {
  if (a.rows() != a.cols()) throw InvalidInput("Cholesky: matrix is not square");
  if (!IsSymmetric(a, 1e-8)) throw InvalidInput("Cholesky: matrix is not symmetric");
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < n; ++j) {
    auto row_j = lower_.Row(j).first(j);
    double pivot = a(j, j) - kernels::Dot(row_j, row_j);
    if (!(pivot > 0.0) || !std::isfinite(pivot))
      throw NumericError("Cholesky: matrix is not positive definite (pivot " +
                         std::to_string(j) + " = " + std::to_string(pivot) + ")");
    const double diag = std::sqrt(pivot);
    lower_(j, j) = diag;
    log_det_ += 2.0 * std::log(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a(i, j) - kernels::Dot(lower_.Row(i).first(j), row_j);
      lower_(i, j) = v / diag;
    }
  }
}

Vector Cholesky::SolveLower(std::span<const double> b) const {
  const std::size_t n = dim();
  if (b.size() != n) throw InvalidInput("Cholesky::SolveLower: dimension mismatch");
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = b[i] - kernels::Dot(lower_.Row(i).first(i),
                                   std::span<const double>(y).first(i));
    y[i] = v / lower_(i, i);
  }
  return y;
}

Vector Cholesky::Solve(std::span<const double> b) const {
  Vector x = SolveLower(b);
  const std::size_t n = dim();
  for (std::size_t ii = n; ii-- > 0;) {
    double v = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) v -= lower_(k, ii) * x[k];
    x[ii] = v / lower_(ii, ii);
  }
  return x;
}

Matrix Cholesky::Solve(const Matrix& b) const {
  if (b.rows() != dim()) throw InvalidInput("Cholesky::Solve: dimension mismatch");
  Matrix x(b.rows(), b.cols());
  Vector column(b.rows());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t r = 0; r < b.rows(); ++r) column[r] = b(r, c);
    Vector sol = Solve(column);
    for (std::size_t r = 0; r < b.rows(); ++r) x(r, c) = sol[r];
  }
  return x;
}

double Cholesky::QuadraticForm(std::span<const double> b) const {
  Vector y = SolveLower(b);
  return kernels::Dot(y, y);
}

Matrix Cholesky::Inverse() const {
  Matrix inv = Solve(Matrix::Identity(dim()));
  return Symmetrized(inv);
}

CholSolveResult CholSolve(const Matrix& a, const Matrix& b) {
  Cholesky chol(a);
  return {chol.Solve(b), chol.LogDet()};
}

int ClipEigenvalues(Matrix* m, double floor) {
  SymEigResult eig = SymEig(*m);
  int changed = 0;
  for (double& v : eig.values) {
    if (v < floor) {
      v = floor;
      ++changed;
    }
  }
  if (changed == 0) return 0;
  const std::size_t n = m->rows();
  Matrix out(n, n);
  Vector col(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) col[k] = eig.vectors(k, i);
    AddOuter(eig.values[i], col, col, &out);
  }
  *m = Symmetrized(out);
  return changed;
}

}  // namespace svb
