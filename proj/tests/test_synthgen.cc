// tests/test_synthgen.cc

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
#include <set>
#include <vector>

#include "svb/errors.h"
#include "svb/evalkit.h"
#include "svb/moments.h"
#include "svb/plda.h"
#include "svb/synthgen.h"

using namespace svb;
using doctest::Approx;

namespace {

DomainSpec Small(std::uint64_t seed = 1) {
  DomainSpec s;
  s.dim = 8;
  s.n_speakers = 40;
  s.utts_per_speaker = 10;
  s.seed = seed;
  return s;
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("generated populations") {
  SUBCASE("counts") {
    const EmbeddingSet set = GenerateDomain(Small());
    CHECK(set.size() == 400);
    std::set<std::string> speakers;
    for (const auto& r : set.records) speakers.insert(r.speaker_id);
    CHECK(speakers.size() == 40);
    CHECK(set.dim == 8);
  }
  SUBCASE("same seed, same set") {
    DomainSpec s = Small(9);
    s.warp_strength = 0.5;
    s.heavy_tail_dof = 5.0;
    s.shift.affine = MakeRandomAffineShift(8, 3, 0.3, 0.5, 2.0, 1.0);
    s.shift.nonlinear_strength = 0.5;
    CHECK(GenerateDomain(s) == GenerateDomain(s));
    DomainSpec other = s;
    other.seed = 10;
    CHECK_FALSE(GenerateDomain(other) == GenerateDomain(s));
  }
  SUBCASE("total covariance follows the law of total variance") {
    DomainSpec s = Small(4);
    s.n_speakers = 500;
    s.between_scale = 1.0;
    s.within_scale = 0.7;
    const EmbeddingSet set = GenerateDomain(s);
    const MomentSummary m = Moments(set.Vectors());
    const double expected = 1.0 + 0.49;
    for (std::size_t i = 0; i < 8; ++i) {
      CHECK(m.covariance(i, i) == Approx(expected).epsilon(0.1));
      for (std::size_t j = 0; j < i; ++j) CHECK(std::fabs(m.covariance(i, j)) < 0.1 * expected);
    }
  }
  SUBCASE("invalid specs") {
    DomainSpec s = Small();
    s.dim = 0;
    CHECK_THROWS_AS(GenerateDomain(s), InvalidInput);
    s = Small();
    s.heavy_tail_dof = 2.0;
    CHECK_THROWS_AS(GenerateDomain(s), InvalidInput);
    s = Small();
    s.speaker_rank = 9;
    CHECK_THROWS_AS(GenerateDomain(s), InvalidInput);
  }
}

TEST_CASE("speaker subspace") {
  const Matrix basis = SpeakerBasis(8, 3, 5);
  const Matrix gram = MatMul(Transpose(basis), basis);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(gram(i, j) == Approx(i == j ? 1.0 : 0.0));
  CHECK(SpeakerBasis(8, 3, 5) == basis);
}

TEST_CASE("warping raises kurtosis") {
  std::vector<double> medians;
  for (double warp : {0.0, 0.5, 1.0}) {
    std::vector<double> kurt;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      DomainSpec s = Small(seed);
      s.warp_strength = warp;
      kurt.push_back(std::fabs(ComputeGaussianity(GenerateDomain(s)).aggregate_kurt));
    }
    medians.push_back(Median(kurt));
  }
  CHECK(medians[1] > medians[0]);
  CHECK(medians[2] > medians[1]);
}

TEST_CASE("speaker-disjoint splits") {
  DomainSpec s = Small(2);
  s.n_speakers = 73;
  const auto [adapt, test] = SplitBySpeaker(GenerateDomain(s), {40, 33});
  std::set<std::string> a, t;
  for (const auto& r : adapt.records) a.insert(r.speaker_id);
  for (const auto& r : test.records) t.insert(r.speaker_id);
  CHECK(a.size() == 40);
  CHECK(t.size() == 33);
  for (const auto& id : a) CHECK(t.count(id) == 0);
  CHECK_THROWS_AS(SplitBySpeaker(GenerateDomain(s), {40, 34}), InvalidInput);
}

TEST_CASE("trial lists") {
  const EmbeddingSet set = GenerateDomain(Small(3));
  std::map<std::string, std::string> speaker;
  for (const auto& r : set.records) speaker[r.utterance_id] = r.speaker_id;
  SUBCASE("labels agree with speakers") {
    const auto trials = MakeTrials(set, 200, 500, 11);
    CHECK(trials.size() == 700);
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& t : trials) {
      CHECK(t.enroll != t.test);
      CHECK(*t.is_target == (speaker[t.enroll] == speaker[t.test]));
      seen.insert({t.enroll, t.test});
    }
    CHECK(seen.size() == trials.size());
    CHECK(MakeTrials(set, 200, 500, 11) == trials);
  }
  SUBCASE("nontarget only") {
    for (const auto& t : MakeTrials(set, 0, 50, 1)) CHECK_FALSE(*t.is_target);
  }
  SUBCASE("too many targets names the maximum") {
    // 40 speakers x C(10, 2) pairs.
    try {
      MakeTrials(set, 2000, 10, 1);
      FAIL("expected InvalidInput");
    } catch (const InvalidInput& e) {
      CHECK(std::string(e.what()).find("1800") != std::string::npos);
    }
  }
}

TEST_CASE("trained PLDA approaches the Bayes-matched EER") {
  DomainSpec s = Small(5);
  s.n_speakers = 300;
  s.within_scale = 1.0;
  const EmbeddingSet train = GenerateDomain(s);
  s.seed = 6;
  s.n_speakers = 100;
  s.speaker_prefix = "eval";
  const EmbeddingSet eval = GenerateDomain(s);
  const auto trials = MakeTrials(eval, 2000, 8000, 7);

  PldaModel truth;
  truth.mean.assign(8, 0.0);
  truth.between_cov = Matrix::Identity(8);
  truth.within_cov = Matrix::Identity(8);
  const double bayes = ScoreTrials(nullptr, truth, eval, trials).eer->eer;
  const double trained = ScoreTrials(nullptr, FitPlda(train, {}), eval, trials).eer->eer;
  MESSAGE("Bayes " << bayes << " trained " << trained);
  CHECK(bayes > 0.01);
  CHECK(std::fabs(trained - bayes) < 0.02);
}
