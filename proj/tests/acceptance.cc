// tests/acceptance.cc

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

// Acceptance run: one PASS/FAIL line per criterion, with the checks behind
// each line listed underneath. Exit status 0 only if every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.h"
#include "svb/evalkit.h"
#include "svb/linear_norm.h"
#include "svb/model_io.h"
#include "svb/pipeline.h"
#include "svb/plda.h"
#include "svb/synthgen.h"
#include "svb/vae.h"
#include "test_util.h"

using namespace svb;

namespace {

struct Check {
  bool ok;
  std::string what;
};

class Criterion {
 public:
  Criterion(std::string id, std::string title, double budget_seconds)
      : id_(std::move(id)), title_(std::move(title)), budget_(budget_seconds),
        start_(std::chrono::steady_clock::now()) {}

  void Add(bool ok, const std::string& what) { checks_.push_back({ok, what}); }

  bool Finish() {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    bool ok = secs < budget_;
    for (const auto& c : checks_) ok = ok && c.ok;
    std::printf("%s %s: %s (%.1f s, budget %.0f s)\n", ok ? "PASS" : "FAIL", id_.c_str(),
                title_.c_str(), secs, budget_);
    for (const auto& c : checks_) std::printf("    %s %s\n", c.ok ? "ok " : "BAD", c.what.c_str());
    std::fflush(stdout);
    return ok;
  }

 private:
  std::string id_, title_;
  double budget_;
  std::chrono::steady_clock::time_point start_;
  std::vector<Check> checks_;
};

std::string Fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), format, a, b);
  return buf;
}

constexpr NormalizerKind kAll[] = {NormalizerKind::kNone, NormalizerKind::kPca,
                                   NormalizerKind::kLda, NormalizerKind::kVae,
                                   NormalizerKind::kCvae};

std::string Name(NormalizerKind k) { return std::string(NormalizerKindName(k)); }

double MedianPct(const ExperimentResult& r, NormalizerKind k, std::string_view cond) {
  return 100.0 * r.MedianEer(k, cond).value_or(std::nan(""));
}

// Median over seeds of a Gaussianity statistic.
double MedianStat(const ExperimentResult& r, std::string_view group, NormalizerKind k,
                  double GaussianityCell::*field) {
  std::vector<double> v;
  for (const auto* c : r.GaussianityOf(group, k)) v.push_back(c->*field);
  return v.empty() ? std::nan("") : Median(v);
}

bool UnitOracles() {
  Criterion c("1", "unit oracles", 10);
  {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> mu_dist(-2.0, 2.0), sigma_dist(0.1, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double mu = mu_dist(rng), sigma = sigma_dist(rng);
      const double exact = GaussianKl(mu, 2.0 * std::log(sigma));
      worst = std::max(worst,
                       std::fabs(oracles::MonteCarloKl(mu, sigma, 1000000, &rng) - exact) / exact);
    }
    c.Add(worst < 1e-2, Fmt("KL closed form vs Monte Carlo: max rel err %.2e < 1e-2", worst));
  }
  {
    std::mt19937_64 rng(99);
    VaeConfig cfg;
    cfg.latent_dim = 2;
    cfg.hidden = {5, 4};
    const Matrix batch = testing::RandomMatrix(6, 3, &rng), noise = testing::RandomMatrix(6, 2, &rng);
    const std::vector<int> labels = {0, 1, 2, 0, 1, 2};
    const double vae = oracles::ElboGradientError(InitVae(3, cfg), batch, noise, std::nullopt);
    cfg.cohesive_weight = 0.7;
    const double cvae = oracles::ElboGradientError(InitVae(3, cfg), batch, noise,
                                                   std::span<const int>(labels));
    c.Add(std::max(vae, cvae) < 1e-4,
          Fmt("VAE / C-VAE gradients vs central differences: %.2e / %.2e < 1e-4", vae, cvae));
  }
  {
    std::mt19937_64 rng(17);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      PldaModel m;
      m.mean = testing::RandomVector(3, &rng);
      m.between_cov = testing::RandomSpd(3, &rng, 0.2);
      m.within_cov = testing::RandomSpd(3, &rng, 0.2);
      const Vector e = testing::RandomVector(3, &rng, 2.0), t = testing::RandomVector(3, &rng, 2.0);
      worst = std::max(worst, std::fabs(ScoreLlr(m, e, t) - oracles::PldaLlr(m, e, t)));
    }
    PldaModel one;
    one.mean = {0.0};
    one.between_cov = Matrix{{1.0}};
    one.within_cov = Matrix{{1.0}};
    const double hand = std::fabs(ScoreLlr(one, Vector{0.0}, Vector{0.0}) -
                                  (std::log(2.0) - 0.5 * std::log(3.0)));
    c.Add(worst < 1e-8 && hand < 1e-12,
          Fmt("PLDA LLR vs joint/marginal densities: %.2e < 1e-8; 1-D hand case %.1e < 1e-12",
              worst, hand));
  }
  {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> count(1, 40), coarse(0, 9);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> tgt(count(rng)), non(count(rng));
      const bool tied = trial % 2 == 1;
      for (double& s : tgt) s = tied ? coarse(rng) + 2 : normal(rng) + 1.0;
      for (double& s : non) s = tied ? coarse(rng) : normal(rng);
      worst = std::max(worst, std::fabs(ComputeEer(tgt, non).eer - oracles::BruteForceEer(tgt, non)));
    }
    const double toy = ComputeEer(std::vector<double>{0.6, 0.4, 0.8},
                                  std::vector<double>{0.5, 0.3, 0.2}).eer;
    c.Add(worst < 1e-12 && toy == 1.0 / 3.0,
          Fmt("EER vs exhaustive thresholds on 1000 sets: %.1e; toy case = %.17g", worst, toy));
  }
  {
    double worst_drop = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      std::mt19937_64 rng(seed);
      PldaFitTrace trace;
      FitPlda(testing::RandomLabeledSet(4, 30, 5, &rng), {10}, &trace);
      for (std::size_t i = 1; i < trace.log_likelihoods.size(); ++i)
        worst_drop = std::min(worst_drop, trace.log_likelihoods[i] - trace.log_likelihoods[i - 1]);
    }
    c.Add(worst_drop >= -1e-8,
          Fmt("PLDA EM log-likelihood, 20 seeds x 10 iterations: worst step %.2e >= -1e-8",
              worst_drop));
  }
  {
    std::mt19937_64 rng(8);
    const EmbeddingSet train = testing::RandomLabeledSet(6, 12, 5, &rng);
    VaeConfig cfg;
    cfg.latent_dim = 3;
    cfg.hidden = {8};
    cfg.epochs = 2;
    std::vector<AnyModel> models = {IdentityNormalizer{6}, FitPca(train, 3), FitLda(train, 3),
                                    TrainVae(train, cfg).model};
    cfg.cohesive_weight = 0.1;
    models.push_back(TrainVae(train, cfg).model);
    models.push_back(FitPlda(train, {}));
    bool all = true;
    for (const auto& m : models) {
      const std::string bytes = EncodeModel(m);
      const AnyModel back = DecodeModel(bytes);
      all = all && back == m && EncodeModel(back) == bytes;
    }
    c.Add(all, "model containers round-trip bit-exactly (identity, pca, lda, vae, c-vae, plda)");
  }
  return c.Finish();
}

PipelineConfig Desk(std::vector<AdaptationMode> modes,
                    std::vector<NormalizerKind> systems = {std::begin(kAll), std::end(kAll)}) {
  PipelineConfig c = PresetConfig("desk");
  c.adaptation_modes = std::move(modes);
  c.systems = std::move(systems);
  return c;
}

bool IndOodTrend() {
  Criterion c("2", "IND: every normalizer beats Baseline; OOD raises every EER", 120);
  const ExperimentResult r = RunExperiment(Desk({AdaptationMode::kNone}));
  const double base = MedianPct(r, NormalizerKind::kNone, kCondInd);
  for (NormalizerKind k : {NormalizerKind::kPca, NormalizerKind::kLda, NormalizerKind::kVae,
                           NormalizerKind::kCvae}) {
    const double v = MedianPct(r, k, kCondInd);
    c.Add(v < base, Name(k) + Fmt(" IND %.2f%% < Baseline %.2f%%", v, base));
  }
  for (NormalizerKind k : kAll) {
    const double ind = MedianPct(r, k, kCondInd), ood = MedianPct(r, k, kCondOod);
    c.Add(ood > ind, Name(k) + Fmt(" OOD %.2f%% > IND %.2f%%", ood, ind));
  }
  return c.Finish();
}

bool PldaAdaptationTrend() {
  Criterion c("3", "PLDA-RET and PLDA-UAT lower the OOD EER of every system", 120);
  const ExperimentResult r =
      RunExperiment(Desk({AdaptationMode::kPldaRet, AdaptationMode::kPldaUat}));
  for (NormalizerKind k : kAll) {
    const double ood = MedianPct(r, k, kCondOod);
    const double ret = MedianPct(r, k, "plda-ret"), uat = MedianPct(r, k, "plda-uat");
    c.Add(ret < ood, Name(k) + Fmt(" PLDA-RET %.2f%% < PLDA %.2f%%", ret, ood));
    c.Add(uat < ood, Name(k) + Fmt(" PLDA-UAT %.2f%% < PLDA %.2f%%", uat, ood));
  }
  return c.Finish();
}

bool NormAdaptTrend() {
  Criterion c("4", "Norm-Adapt+PLDA-RET helps VAE/C-VAE more than PCA", 180);
  const ExperimentResult r = RunExperiment(
      Desk({AdaptationMode::kPldaRet, AdaptationMode::kNormAdaptPldaRet},
           {NormalizerKind::kPca, NormalizerKind::kVae, NormalizerKind::kCvae}));
  auto gain = [&](NormalizerKind k) {
    return MedianPct(r, k, "plda-ret") - MedianPct(r, k, "norm-adapt+plda-ret");
  };
  const double pca = gain(NormalizerKind::kPca);
  for (NormalizerKind k : {NormalizerKind::kVae, NormalizerKind::kCvae}) {
    const double g = gain(k);
    c.Add(g > 0.0, Name(k) + Fmt(" Norm-Adapt+PLDA-RET %.2f%% < PLDA-RET %.2f%%",
                                 MedianPct(r, k, "norm-adapt+plda-ret"),
                                 MedianPct(r, k, "plda-ret")));
    c.Add(g > pca, Name(k) + Fmt(" improvement %.2f points > PCA improvement %.2f", g, pca));
  }
  return c.Finish();
}

bool GaussianityTrend() {
  Criterion c("5", "normalization and VAE/C-VAE adaptation reduce |skew| and |kurt|", 60);
  const ExperimentResult r =
      RunExperiment(Desk({AdaptationMode::kNormAdapt},
                         {NormalizerKind::kPca, NormalizerKind::kLda, NormalizerKind::kVae,
                          NormalizerKind::kCvae}));
  const std::pair<const char*, double GaussianityCell::*> stats[] = {
      {"|skew|", &GaussianityCell::mean_abs_skew}, {"|kurt|", &GaussianityCell::mean_abs_kurt}};
  for (const auto& [label, field] : stats) {
    const double raw = MedianStat(r, "raw", NormalizerKind::kNone, field);
    for (NormalizerKind k : {NormalizerKind::kPca, NormalizerKind::kLda, NormalizerKind::kVae,
                             NormalizerKind::kCvae}) {
      const double v = MedianStat(r, "original", k, field);
      c.Add(v < raw, Name(k) + " " + label + Fmt(" %.4f < raw %.4f", v, raw));
    }
    for (NormalizerKind k : {NormalizerKind::kVae, NormalizerKind::kCvae}) {
      const double before = MedianStat(r, "original", k, field);
      const double after = MedianStat(r, "adapted", k, field);
      c.Add(after < before, Name(k) + " adapted " + label + Fmt(" %.4f < %.4f", after, before));
    }
  }
  return c.Finish();
}

bool Properties() {
  Criterion c("6", "property suites", 60);
  {
    std::mt19937_64 rng(5);
    bool exact = true;
    for (int i = 0; i < 200; ++i) {
      PldaModel m;
      m.mean = testing::RandomVector(6, &rng);
      m.between_cov = testing::RandomSpd(6, &rng);
      m.within_cov = testing::RandomSpd(6, &rng);
      const Vector e = testing::RandomVector(6, &rng), t = testing::RandomVector(6, &rng);
      exact = exact && ScoreLlr(m, e, t) == ScoreLlr(m, t, e);
    }
    c.Add(exact, "PLDA score symmetry is exact on 200 random models");
  }
  {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    bool same = true;
    for (int set = 0; set < 50; ++set) {
      std::vector<double> tgt(100), non(300);
      for (double& s : tgt) s = normal(rng) + 1.0;
      for (double& s : non) s = normal(rng);
      const double base = ComputeEer(tgt, non).eer;
      for (double& s : tgt) s = std::exp(s);
      for (double& s : non) s = std::exp(s);
      same = same && std::fabs(ComputeEer(tgt, non).eer - base) < 1e-12;
    }
    c.Add(same, "EER unchanged by a strictly increasing transform on 50 score sets");
  }
  {
    const PipelineConfig cfg = PresetConfig("desk");
    bool disjoint = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const ExperimentData d = GenerateExperimentData(cfg, seed);
      std::set<std::string> adapt, train;
      for (const auto& rec : d.ood_adapt.records) adapt.insert(rec.speaker_id);
      for (const auto& rec : d.ind_train.records) train.insert(rec.speaker_id);
      for (const auto& rec : d.ood_test.records)
        disjoint = disjoint && !adapt.count(rec.speaker_id) && !train.count(rec.speaker_id);
    }
    c.Add(disjoint, "OOD test speakers never appear in adaptation or training splits (5 seeds)");
  }
  {
    const PipelineConfig cfg = PresetConfig("desk");
    const ExperimentData a = GenerateExperimentData(cfg, 4), b = GenerateExperimentData(cfg, 4);
    bool same = a.ind_train == b.ind_train && a.ood_test == b.ood_test &&
                a.ind_trials == b.ind_trials && a.ood_trials == b.ood_trials;
    NormalizerParams params = cfg.normalizer;
    params.vae.epochs = 3;
    same = same && FitNormalizer(NormalizerKind::kCvae, a.ind_train, params).model ==
                       FitNormalizer(NormalizerKind::kCvae, b.ind_train, params).model;
    c.Add(same, "data, trials and trained C-VAE are identical for identical seeds");
  }
  return c.Finish();
}

}  // namespace

int main() {
  std::vector<std::function<bool()>> criteria = {
      UnitOracles,    IndOodTrend,      PldaAdaptationTrend,
      NormAdaptTrend, GaussianityTrend, Properties};
  int failed = 0;
  for (const auto& run : criteria) failed += !run();
  std::printf("%s: %d of %zu criteria passed\n", failed ? "FAIL" : "PASS",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
