// src/numstats/matrix.cc

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

#include "svb/matrix.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "svb/errors.h"
#include "svb/kernels.h"

namespace svb {

namespace {

void RequireSameShape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidInput(std::string(what) + ": shape mismatch");
}

}  // namespace

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw InvalidInput("Matrix: ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::Identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::Diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::FromData(std::size_t rows, std::size_t cols, Vector data) {
  if (data.size() != rows * cols)
    throw InvalidInput("Matrix::FromData: entry count != rows*cols");
  Matrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.data_ = std::move(data);
  return m;
}

Matrix Transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) t(c, r) = m(r, c);
  return t;
}

Matrix MatMul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw InvalidInput("MatMul: inner dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = c.Row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      double aik = a(i, k);
      if (aik != 0.0) kernels::Axpy(aik, b.Row(k), out);
    }
  }
  return c;
}

Matrix MatMulTransposed(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols())
    throw InvalidInput("MatMulTransposed: inner dimension mismatch");
  Matrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j)
      c(i, j) = kernels::Dot(a.Row(i), b.Row(j));
  return c;
}

Vector MatVec(const Matrix& m, std::span<const double> x) {
  if (m.cols() != x.size()) throw InvalidInput("MatVec: dimension mismatch");
  Vector out(m.rows());
  kernels::MatVec(m.data(), x, out);
  return out;
}

Vector TransposedMatVec(const Matrix& m, std::span<const double> x) {
  if (m.rows() != x.size())
    throw InvalidInput("TransposedMatVec: dimension mismatch");
  Vector out(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) kernels::Axpy(x[r], m.Row(r), out);
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  RequireSameShape(a, b, "operator+");
  Matrix c = a;
  kernels::Axpy(1.0, b.data(), c.data());
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  RequireSameShape(a, b, "operator-");
  Matrix c = a;
  kernels::Axpy(-1.0, b.data(), c.data());
  return c;
}

Matrix operator*(double s, const Matrix& m) {
  Matrix c = m;
  for (double& v : c.data()) v *= s;
  return c;
}

void AddOuter(double alpha, std::span<const double> u, std::span<const double> v,
              Matrix* m) {
  if (m->rows() != u.size() || m->cols() != v.size())
    throw InvalidInput("AddOuter: dimension mismatch");
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] != 0.0) kernels::Axpy(alpha * u[i], v, m->Row(i));
}

Matrix Symmetrized(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("Symmetrized: matrix not square");
  Matrix s(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      s(i, j) = 0.5 * (m(i, j) + m(j, i));
  return s;
}

double Trace(const Matrix& m) {
  double t = 0.0;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) t += m(i, i);
  return t;
}

double FrobeniusNorm(const Matrix& m) {
  return std::sqrt(kernels::Dot(m.data(), m.data()));
}

double MaxAbs(const Matrix& m) {
  double best = 0.0;
  for (double v : m.data()) best = std::max(best, std::fabs(v));
  return best;
}

bool IsSymmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double bound = tol * std::max(1.0, MaxAbs(m));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (std::fabs(m(i, j) - m(j, i)) > bound) return false;
  return true;
}

bool AllFinite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

Vector DiagonalOf(const Matrix& m) {
  Vector d(std::min(m.rows(), m.cols()));
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = m(i, i);
  return d;
}

}  // namespace svb
