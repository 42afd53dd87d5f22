// tests/test_plda.cc

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

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "svb/errors.h"
#include "svb/plda.h"
#include "oracles.h"
#include "test_util.h"

using namespace svb;
using doctest::Approx;

namespace {

PldaModel OneDim(double b, double w) {
  PldaModel m;
  m.mean = {0.0};
  m.between_cov = Matrix{{b}};
  m.within_cov = Matrix{{w}};
  return m;
}

PldaModel RandomModel(std::size_t d, std::mt19937_64* rng) {
  PldaModel m;
  m.mean = testing::RandomVector(d, rng);
  m.between_cov = testing::RandomSpd(d, rng, 0.2);
  m.within_cov = testing::RandomSpd(d, rng, 0.2);
  return m;
}

// Speakers drawn from N(0, between) with N(0, within) residuals, both given
// as Cholesky-like factors (x = L z).
EmbeddingSet SampleSet(const Matrix& lb, const Matrix& lw, std::size_t speakers,
                       std::size_t utts, std::mt19937_64* rng) {
  const std::size_t d = lb.rows();
  EmbeddingSet set;
  set.dim = d;
  for (std::size_t s = 0; s < speakers; ++s) {
    const Vector y = MatVec(lb, testing::RandomVector(d, rng));
    for (std::size_t u = 0; u < utts; ++u) {
      Vector x = MatVec(lw, testing::RandomVector(d, rng));
      for (std::size_t i = 0; i < d; ++i) x[i] += y[i];
      set.records.push_back(
          {"s" + std::to_string(s) + "_u" + std::to_string(u), "s" + std::to_string(s), x});
    }
  }
  return set;
}

double RelFrob(const Matrix& a, const Matrix& b) { return FrobeniusNorm(a - b) / FrobeniusNorm(b); }

}  // namespace

TEST_CASE("LLR hand values") {
  const PldaModel m = OneDim(1.0, 1.0);
  CHECK(std::fabs(ScoreLlr(m, Vector{0.0}, Vector{0.0}) - (std::log(2.0) - 0.5 * std::log(3.0))) <
        1e-12);
  CHECK(ScoreLlr(m, Vector{0.0}, Vector{0.0}) == Approx(0.14384).epsilon(1e-4));
  CHECK(ScoreLlr(m, Vector{1.0}, Vector{1.0}) ==
        Approx(std::log(2.0) - 0.5 * std::log(3.0) + 1.0 / 6.0));
  CHECK(ScoreLlr(m, Vector{1.0}, Vector{1.0}) == Approx(0.31051).epsilon(1e-4));
}

TEST_CASE("vanishing speaker variability gives zero scores") {
  const PldaModel m = OneDim(1e-12, 1.0);
  for (double e : {-3.0, 0.0, 2.5})
    for (double t : {-1.0, 0.5, 4.0}) CHECK(std::fabs(ScoreLlr(m, Vector{e}, Vector{t})) < 1e-9);
}

TEST_CASE("LLR matches direct Gaussian density evaluation") {
  std::mt19937_64 rng(17);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const PldaModel m = RandomModel(3, &rng);
    const Vector e = testing::RandomVector(3, &rng, 2.0), t = testing::RandomVector(3, &rng, 2.0);
    worst = std::max(worst, std::fabs(ScoreLlr(m, e, t) - oracles::PldaLlr(m, e, t)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("LLR is exactly symmetric") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const PldaModel m = RandomModel(6, &rng);
    const Vector e = testing::RandomVector(6, &rng), t = testing::RandomVector(6, &rng);
    CHECK(ScoreLlr(m, e, t) == ScoreLlr(m, t, e));
  }
}

TEST_CASE("scorer contracts") {
  const PldaModel m = OneDim(1.0, 1.0);
  CHECK_THROWS_AS(ScoreLlr(m, Vector{0.0, 1.0}, Vector{0.0}), InvalidInput);
  PldaScorer scorer(m);
  const std::vector<Vector> enroll = {{1.0}, {3.0}};
  CHECK(scorer.ScoreMulti(enroll, Vector{0.5}) == Approx(scorer.Score(Vector{2.0}, Vector{0.5})));
}

TEST_CASE("EM log-likelihood is non-decreasing") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    CAPTURE(seed);
    std::mt19937_64 rng(seed);
    const EmbeddingSet set = testing::RandomLabeledSet(4, 30, 5, &rng);
    PldaFitTrace trace;
    const PldaModel m = FitPlda(set, {10}, &trace);
    REQUIRE(trace.log_likelihoods.size() == 11);
    for (std::size_t i = 1; i < trace.log_likelihoods.size(); ++i)
      CHECK(trace.log_likelihoods[i] - trace.log_likelihoods[i - 1] >= -1e-8);
    CHECK(trace.log_likelihoods.back() == Approx(PldaLogLikelihood(m, set)));
    CHECK(m.iterations == 10);
  }
}

TEST_CASE("EM recovers known covariances") {
  // Median over seeds.
  const Matrix eye = Matrix::Identity(2);
  std::vector<double> between_err, within_err;
  for (std::uint64_t seed = 120; seed < 130; ++seed) {
    std::mt19937_64 rng(seed);
    const PldaModel m = FitPlda(SampleSet(eye, eye, 200, 10, &rng), {10});
    between_err.push_back(RelFrob(m.between_cov, eye));
    within_err.push_back(RelFrob(m.within_cov, eye));
  }
  std::sort(between_err.begin(), between_err.end());
  std::sort(within_err.begin(), within_err.end());
  CHECK((between_err[4] + between_err[5]) / 2 < 0.15);
  CHECK((within_err[4] + within_err[5]) / 2 < 0.15);
}

TEST_CASE("fit contracts") {
  std::mt19937_64 rng(9);
  SUBCASE("zero iterations returns the scatter initialization") {
    const EmbeddingSet set = testing::RandomLabeledSet(3, 10, 4, &rng);
    PldaFitTrace trace;
    const PldaModel m = FitPlda(set, {0}, &trace);
    CHECK(trace.log_likelihoods.size() == 1);
    CHECK(m.iterations == 0);
    // Within scatter: pooled deviations from speaker means.
    Matrix within(3, 3);
    std::map<std::string, std::pair<Vector, int>> sums;
    for (const auto& r : set.records) {
      auto& [s, n] = sums[r.speaker_id];
      if (s.empty()) s.assign(3, 0.0);
      for (int i = 0; i < 3; ++i) s[i] += r.vector[i];
      ++n;
    }
    for (const auto& r : set.records) {
      const auto& [s, n] = sums[r.speaker_id];
      Vector dev(3);
      for (int i = 0; i < 3; ++i) dev[i] = r.vector[i] - s[i] / n;
      AddOuter(1.0 / (set.records.size() - sums.size()), dev, dev, &within);
    }
    CHECK(testing::MaxAbsDiff(m.within_cov, within) < 1e-10);
  }
  SUBCASE("one speaker is rejected") {
    CHECK_THROWS_AS(FitPlda(testing::RandomLabeledSet(3, 1, 5, &rng), {}), InvalidInput);
  }
  SUBCASE("all singleton speakers are rejected") {
    CHECK_THROWS_AS(FitPlda(testing::RandomLabeledSet(3, 10, 1, &rng), {}), InvalidInput);
  }
  SUBCASE("retraining is deterministic") {
    const EmbeddingSet set = testing::RandomLabeledSet(3, 10, 4, &rng);
    CHECK(FitPlda(set, {}) == FitPlda(set, {}));
  }
}

TEST_CASE("log-likelihood") {
  SUBCASE("single Gaussian limit") {
    EmbeddingSet set;
    set.dim = 1;
    set.records.push_back({"u", "s", {0.0}});
    CHECK(PldaLogLikelihood(OneDim(0.0, 1.0), set) == Approx(-0.5 * std::log(2 * M_PI)));
  }
  SUBCASE("duplicated data doubles it") {
    std::mt19937_64 rng(4);
    const EmbeddingSet set = testing::RandomLabeledSet(3, 8, 4, &rng);
    EmbeddingSet doubled = set;
    for (const auto& r : set.records) {
      EmbeddingRecord c = r;
      c.utterance_id += "_copy";
      c.speaker_id += "_copy";
      doubled.records.push_back(c);
    }
    const PldaModel m = RandomModel(3, &rng);
    CHECK(PldaLogLikelihood(m, doubled) == Approx(2.0 * PldaLogLikelihood(m, set)));
  }
  SUBCASE("dimension mismatch") {
    std::mt19937_64 rng(4);
    CHECK_THROWS_AS(PldaLogLikelihood(OneDim(1, 1), testing::RandomLabeledSet(2, 3, 2, &rng)),
                    InvalidInput);
  }
}

TEST_CASE("unsupervised adaptation") {
  std::mt19937_64 rng(31);
  const std::size_t d = 3;
  PldaModel m;
  m.mean = {1.0, -1.0, 0.5};
  m.between_cov = Matrix::Diagonal(Vector{2.0, 1.0, 0.5});
  m.within_cov = Matrix::Diagonal(Vector{1.0, 0.5, 0.5});
  auto draw = [&](std::size_t n, double var_scale, const Vector& mean) {
    EmbeddingSet set;
    set.dim = d;
    for (std::size_t i = 0; i < n; ++i) {
      Vector x = testing::RandomVector(d, &rng);
      for (std::size_t k = 0; k < d; ++k)
        x[k] = mean[k] + std::sqrt(var_scale * (m.between_cov(k, k) + m.within_cov(k, k))) * x[k];
      set.records.push_back({"u" + std::to_string(i), "", x});
    }
    return set;
  };
  SUBCASE("zero weights keep covariances and move the mean") {
    const Vector shifted = {3.0, 0.0, -2.0};
    const EmbeddingSet ood = draw(500, 3.0, shifted);
    const PldaModel a = AdaptPldaUnsupervised(m, ood, 0.0, 0.0);
    CHECK(a.between_cov == m.between_cov);
    CHECK(a.within_cov == m.within_cov);
    for (std::size_t k = 0; k < d; ++k) CHECK(std::fabs(a.mean[k] - shifted[k]) < 0.3);
  }
  SUBCASE("data from the model's own distribution leaves it nearly unchanged") {
    UatReport report;
    const PldaModel a = AdaptPldaUnsupervised(m, draw(20000, 1.0, m.mean), 0.5, 0.5, &report);
    CHECK(RelFrob(a.between_cov, m.between_cov) < 0.05);
    CHECK(RelFrob(a.within_cov, m.within_cov) < 0.05);
    CHECK_FALSE(report.rank_deficient);
  }
  SUBCASE("doubled variance raises the total trace toward the OOD trace") {
    const double before = Trace(m.between_cov + m.within_cov);
    const PldaModel a = AdaptPldaUnsupervised(m, draw(20000, 2.0, m.mean), 0.5, 0.5);
    const double after = Trace(a.between_cov + a.within_cov);
    CHECK(after > before * 1.8);
    CHECK(after < before * 2.2);
  }
  SUBCASE("small sets are shrunk and flagged") {
    UatReport report;
    AdaptPldaUnsupervised(m, draw(3, 1.0, m.mean), 0.5, 0.5, &report);
    CHECK(report.rank_deficient);
    CHECK(report.shrinkage == Approx(3.0 / 6.0));
  }
  SUBCASE("weights outside [0,1] are rejected") {
    CHECK_THROWS_AS(AdaptPldaUnsupervised(m, draw(50, 1.0, m.mean), 1.5, 0.5), InvalidInput);
  }
}
