// include/svb/matrix.h

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

#ifndef SVB_MATRIX_H_
#define SVB_MATRIX_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace svb {

using Vector = std::vector<double>;

/// Dense row-major double-precision matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix Identity(std::size_t n);
  static Matrix Diagonal(std::span<const double> diag);
  static Matrix FromData(std::size_t rows, std::size_t cols, Vector data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> Row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> Row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vector data_;
};

Matrix Transpose(const Matrix& m);
Matrix MatMul(const Matrix& a, const Matrix& b);
/// a * b^T
Matrix MatMulTransposed(const Matrix& a, const Matrix& b);
Vector MatVec(const Matrix& m, std::span<const double> x);
/// m^T * x
Vector TransposedMatVec(const Matrix& m, std::span<const double> x);

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& m);

/// m += alpha * u v^T
void AddOuter(double alpha, std::span<const double> u, std::span<const double> v,
              Matrix* m);
/// (m + m^T) / 2
Matrix Symmetrized(const Matrix& m);

double Trace(const Matrix& m);
double FrobeniusNorm(const Matrix& m);
double MaxAbs(const Matrix& m);
/// max |m(i,j) - m(j,i)| <= tol * max(1, MaxAbs(m))
bool IsSymmetric(const Matrix& m, double tol);
bool AllFinite(std::span<const double> values);
Vector DiagonalOf(const Matrix& m);

}  // namespace svb

#endif  // SVB_MATRIX_H_
