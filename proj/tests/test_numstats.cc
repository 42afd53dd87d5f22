// tests/test_numstats.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <string>

#include "svb/errors.h"
#include "svb/linalg.h"
#include "svb/matrix.h"
#include "svb/moments.h"
#include "test_util.h"

using namespace svb;
using doctest::Approx;

namespace {

std::vector<Vector> Scalars(std::initializer_list<double> xs) {
  std::vector<Vector> out;
  for (double x : xs) out.push_back({x});
  return out;
}

}  // namespace

TEST_CASE("matrix basics") {
  Matrix m{{1, 2, 3}, {4, 5, 6}};
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(Transpose(m)(2, 1) == 6);
  Matrix p = MatMul(m, Transpose(m));
  CHECK(p == Matrix{{14, 32}, {32, 77}});
  CHECK(MatMulTransposed(m, m) == p);
  CHECK(MatVec(m, Vector{1, 0, -1}) == Vector{-2, -2});
  CHECK(TransposedMatVec(m, Vector{1, 1}) == Vector{5, 7, 9});
  CHECK(Trace(p) == 91);
  CHECK(IsSymmetric(p, 0.0));
  CHECK_FALSE(IsSymmetric(m, 1e-8));
  CHECK(DiagonalOf(p) == Vector{14, 77});
  CHECK_THROWS_AS(MatMul(m, m), InvalidInput);
}

TEST_CASE("moments: hand examples") {
  SUBCASE("symmetric sample has zero skew") {
    auto s = Moments(Scalars({-1, 0, 1}));
    CHECK(s.skewness[0] == Approx(0.0));
    CHECK(s.mean[0] == Approx(0.0));
    CHECK(s.covariance(0, 0) == Approx(2.0 / 3.0));
  }
  SUBCASE("two-point sample has excess kurtosis -2") {
    auto s = Moments(Scalars({-1, 1}));
    CHECK(s.excess_kurtosis[0] == Approx(-2.0).epsilon(1e-12));
  }
  SUBCASE("{0,0,0,1} skew") {
    // m2 = 3/16, m3 = 3/32 -> skew = (3/32) / (3/16)^1.5
    auto s = Moments(Scalars({0, 0, 0, 1}));
    const double oracle = 0.09375 / std::pow(0.1875, 1.5);
    CHECK(s.skewness[0] == Approx(oracle).epsilon(1e-12));
    CHECK(s.skewness[0] == Approx(1.1547).epsilon(1e-4));
  }
  SUBCASE("constant dimension is flagged and reported as zero") {
    std::vector<Vector> xs = {{1, 5}, {2, 5}, {4, 5}};
    auto s = Moments(xs);
    CHECK_FALSE(s.degenerate[0]);
    CHECK(s.degenerate[1]);
    CHECK(s.AnyDegenerate());
    CHECK(s.skewness[1] == 0.0);
    CHECK(s.excess_kurtosis[1] == 0.0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(Moments(Scalars({1})), InvalidInput);
    std::vector<Vector> ragged = {{1, 2}, {3}};
    CHECK_THROWS_AS(Moments(ragged), InvalidInput);
  }
}

TEST_CASE("moments: shift and scale invariance") {
  std::mt19937_64 rng(17);
  std::exponential_distribution<double> expo(1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vector> xs;
    for (int i = 0; i < 200; ++i) xs.push_back({expo(rng), expo(rng) * expo(rng)});
    const double c = 3.5 * (trial - 10), scale = 0.1 + trial;
    std::vector<Vector> shifted = xs, scaled = xs;
    for (auto& v : shifted)
      for (double& x : v) x += c;
    for (auto& v : scaled)
      for (double& x : v) x *= scale;
    auto base = Moments(xs), sh = Moments(shifted), sc = Moments(scaled);
    for (int d = 0; d < 2; ++d) {
      CHECK(std::abs(sh.mean[d] - base.mean[d] - c) < 1e-10 * (1 + std::abs(c)));
      CHECK(std::abs(sh.skewness[d] - base.skewness[d]) < 1e-10);
      CHECK(std::abs(sh.excess_kurtosis[d] - base.excess_kurtosis[d]) < 1e-10);
      CHECK(std::abs(sc.skewness[d] - base.skewness[d]) < 1e-10);
      CHECK(std::abs(sc.excess_kurtosis[d] - base.excess_kurtosis[d]) < 1e-10);
    }
    CHECK(IsSymmetric(base.covariance, 1e-10));
  }
}

TEST_CASE("MarginalMoments matches Moments") {
  std::mt19937_64 rng(2);
  std::vector<Vector> xs;
  for (int i = 0; i < 50; ++i) xs.push_back(testing::RandomVector(4, &rng));
  auto full = Moments(xs), marg = MarginalMoments(xs);
  for (int d = 0; d < 4; ++d) {
    CHECK(marg.skewness[d] == Approx(full.skewness[d]).epsilon(1e-12));
    CHECK(marg.excess_kurtosis[d] == Approx(full.excess_kurtosis[d]).epsilon(1e-12));
  }
}

TEST_CASE("SymEig: hand examples") {
  SUBCASE("identity") {
    auto r = SymEig(Matrix::Identity(3));
    CHECK(r.values == Vector{1, 1, 1});
  }
  SUBCASE("diagonal") {
    auto r = SymEig(Matrix{{1, 0}, {0, 3}});
    CHECK(r.values[0] == Approx(3));
    CHECK(r.values[1] == Approx(1));
    CHECK(r.vectors(1, 0) == Approx(1));
    CHECK(r.vectors(0, 1) == Approx(1));
  }
  SUBCASE("[[2,1],[1,2]]") {
    auto r = SymEig(Matrix{{2, 1}, {1, 2}});
    CHECK(r.values[0] == Approx(3).epsilon(1e-12));
    CHECK(r.values[1] == Approx(1).epsilon(1e-12));
    const double h = 1.0 / std::sqrt(2.0);
    CHECK(r.vectors(0, 0) == Approx(h));
    CHECK(r.vectors(1, 0) == Approx(h));
    // (1,-1)/sqrt2 up to the sign convention: the first index wins the tie.
    CHECK(r.vectors(0, 1) == Approx(h));
    CHECK(r.vectors(1, 1) == Approx(-h));
  }
  SUBCASE("non-symmetric input") {
    CHECK_THROWS_AS(SymEig(Matrix{{1, 2}, {0, 1}}), InvalidInput);
    CHECK_THROWS_AS(SymEig(Matrix{{1, 2, 3}}), InvalidInput);
  }
}

TEST_CASE("SymEig: reconstruction and orthonormality on random matrices") {
  std::mt19937_64 rng(23);
  for (std::size_t n : {1, 2, 5, 13, 32}) {
    CAPTURE(n);
    const Matrix m = testing::RandomSymmetric(n, &rng);
    const auto r = SymEig(m);
    const double norm = FrobeniusNorm(m);
    Matrix rebuilt = MatMul(MatMul(r.vectors, Matrix::Diagonal(r.values)), Transpose(r.vectors));
    CHECK(FrobeniusNorm(rebuilt - m) <= 1e-7 * norm);
    Matrix gram = MatMul(Transpose(r.vectors), r.vectors);
    CHECK(MaxAbs(gram - Matrix::Identity(n)) < 1e-10);
    for (std::size_t i = 0; i < n; ++i) {
      if (i + 1 < n) CHECK(r.values[i] >= r.values[i + 1]);
      // m v = lambda v
      Vector col(n);
      for (std::size_t j = 0; j < n; ++j) col[j] = r.vectors(j, i);
      Vector mv = MatVec(m, col);
      for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(mv[j] - r.values[i] * col[j]) <= 1e-8 * norm);
      // Sign convention.
      std::size_t arg = 0;
      for (std::size_t j = 1; j < n; ++j)
        if (std::abs(col[j]) > std::abs(col[arg])) arg = j;
      CHECK(col[arg] > 0.0);
    }
  }
}

TEST_CASE("Cholesky and CholSolve") {
  SUBCASE("identity") {
    Matrix b{{1, 2}, {3, 4}};
    auto r = CholSolve(Matrix::Identity(2), b);
    CHECK(r.solution == b);
    CHECK(r.log_det == 0.0);
  }
  SUBCASE("1x1") {
    auto r = CholSolve(Matrix{{4}}, Matrix{{8}});
    CHECK(r.solution(0, 0) == Approx(2));
    CHECK(r.log_det == Approx(std::log(4.0)).epsilon(1e-15));
  }
  SUBCASE("[[2,1],[1,2]] x = (1,1)") {
    auto r = CholSolve(Matrix{{2, 1}, {1, 2}}, Matrix{{1}, {1}});
    CHECK(r.solution(0, 0) == Approx(1.0 / 3).epsilon(1e-14));
    CHECK(r.solution(1, 0) == Approx(1.0 / 3).epsilon(1e-14));
    CHECK(r.log_det == Approx(std::log(3.0)));
  }
  SUBCASE("non-PD pivot is named") {
    try {
      Cholesky c(Matrix{{1, 2}, {2, 1}});
      FAIL("expected NumericError");
    } catch (const NumericError& e) {
      CHECK(std::string(e.what()).find("pivot 1") != std::string::npos);
    }
    CHECK_THROWS_AS(Cholesky(Matrix{{-1}}), NumericError);
  }
  SUBCASE("quadratic form, lower solve, inverse") {
    std::mt19937_64 rng(4);
    const Matrix a = testing::RandomSpd(6, &rng);
    const Vector b = testing::RandomVector(6, &rng);
    Cholesky c(a);
    const Vector x = c.Solve(b);
    double qf = 0.0;
    for (int i = 0; i < 6; ++i) qf += b[i] * x[i];
    CHECK(c.QuadraticForm(b) == Approx(qf).epsilon(1e-12));
    const Vector y = c.SolveLower(b);
    const Vector ly = MatVec(c.lower(), y);
    for (int i = 0; i < 6; ++i) CHECK(ly[i] == Approx(b[i]).epsilon(1e-12));
    CHECK(MaxAbs(MatMul(a, c.Inverse()) - Matrix::Identity(6)) < 1e-10);
  }
}

TEST_CASE("CholSolve agrees with the eigendecomposition inverse on random SPD matrices") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 1 + trial % 12;
    const Matrix a = testing::RandomSpd(n, &rng);
    const Matrix b = testing::RandomMatrix(n, 3, &rng);
    const auto eig = SymEig(a);
    Vector inv_vals(n);
    double log_det = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      inv_vals[i] = 1.0 / eig.values[i];
      log_det += std::log(eig.values[i]);
    }
    const Matrix inverse =
        MatMul(MatMul(eig.vectors, Matrix::Diagonal(inv_vals)), Transpose(eig.vectors));
    const auto r = CholSolve(a, b);
    CHECK(MaxAbs(r.solution - MatMul(inverse, b)) < 1e-8);
    CHECK(r.log_det == Approx(log_det).epsilon(1e-10));
    CHECK(FrobeniusNorm(MatMul(a, r.solution) - b) <= 1e-8 * FrobeniusNorm(b));
  }
}

TEST_CASE("ClipEigenvalues keeps the PSD part") {
  Matrix m{{1, 0}, {0, -2}};
  CHECK(ClipEigenvalues(&m, 0.0) == 1);
  CHECK(MaxAbs(m - Matrix{{1, 0}, {0, 0}}) < 1e-14);
  Matrix spd{{2, 1}, {1, 2}};
  const Matrix before = spd;
  CHECK(ClipEigenvalues(&spd, 0.0) == 0);
  CHECK(spd == before);
}
