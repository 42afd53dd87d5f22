// src/plda/plda.cc

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

#include "svb/plda.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <string>

#include "svb/errors.h"
#include "svb/kernels.h"
#include "svb/moments.h"

namespace svb {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kWithinFloor = 1e-10;

// Per-speaker sufficient statistics, centered on the model mean.
struct SpeakerStats {
  double count = 0.0;
  Vector centered_mean;  // mean(x) - model mean
};

struct GroupedData {
  std::vector<SpeakerStats> speakers;
  Matrix deviation_scatter;  // sum over utterances of (x - speaker mean)(...)^T
  double total = 0.0;
};

GroupedData GroupBySpeaker(const EmbeddingSet& set, const Vector& mean) {
  if (!set.IsLabeled()) throw InvalidInput("PLDA needs speaker labels on every record");
  if (set.dim != mean.size())
    throw InvalidInput("PLDA dimension " + std::to_string(mean.size()) +
                       " does not match data dimension " + std::to_string(set.dim));
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < set.size(); ++i)
    members[set.records[i].speaker_id].push_back(i);

  const std::size_t dim = set.dim;
  GroupedData g;
  g.deviation_scatter = Matrix(dim, dim);
  g.total = static_cast<double>(set.size());
  Vector dev(dim);
  for (const auto& [spk, idx] : members) {
    SpeakerStats s;
    s.count = static_cast<double>(idx.size());
    Vector spk_mean(dim, 0.0);
    for (std::size_t i : idx) kernels::Axpy(1.0 / s.count, set.records[i].vector, spk_mean);
    for (std::size_t i : idx) {
      for (std::size_t d = 0; d < dim; ++d) dev[d] = set.records[i].vector[d] - spk_mean[d];
      AddOuter(1.0, dev, dev, &g.deviation_scatter);
    }
    s.centered_mean = spk_mean;
    kernels::Axpy(-1.0, mean, s.centered_mean);
    g.speakers.push_back(std::move(s));
  }
  g.deviation_scatter = Symmetrized(g.deviation_scatter);
  return g;
}

// sum_ij a_ij b_ij
double FrobeniusInner(const Matrix& a, const Matrix& b) {
  return kernels::Dot(a.data(), b.data());
}

double LogLikelihoodOf(const PldaModel& model, const GroupedData& g) {
  const std::size_t dim = model.dim();
  const double d = static_cast<double>(dim);
  Cholesky within(model.within_cov);
  const Matrix within_inv = within.Inverse();
  double ll = -0.5 * FrobeniusInner(within_inv, g.deviation_scatter);
  std::map<double, Cholesky> by_count;
  for (const auto& s : g.speakers) {
    auto it = by_count.find(s.count);
    if (it == by_count.end())
      it = by_count.emplace(s.count, Cholesky(model.between_cov +
                                              (1.0 / s.count) * model.within_cov))
               .first;
    const Cholesky& mean_cov = it->second;
    const double n = s.count;
    ll += -0.5 * (n - 1.0) * d * kLog2Pi - 0.5 * (n - 1.0) * within.LogDet() -
          0.5 * d * std::log(n);
    ll += -0.5 * (d * kLog2Pi + mean_cov.LogDet() +
                  mean_cov.QuadraticForm(s.centered_mean));
  }
  return ll;
}

// If the smallest eigenvalue is below `trigger`, raises every eigenvalue
// below `floor` to `floor`. Returns true if a repair happened.
bool RepairEigenvalues(Matrix* m, double floor, double trigger) {
  *m = Symmetrized(*m);
  if (SymEig(*m).values.back() >= trigger) return false;
  ClipEigenvalues(m, floor);
  return true;
}

double BetweenTrigger(const Matrix& between) {
  return -1e-12 * std::max(1.0, Trace(between) / static_cast<double>(between.rows()));
}

double WithinFloor(const Matrix& within) {
  const double scale = Trace(within) / static_cast<double>(within.rows());
  return kWithinFloor * (scale > 0.0 ? scale : 1.0);
}

}  // namespace

void PldaModel::Validate() const {
  const std::size_t d = dim();
  if (d == 0) throw InvalidInput("PLDA model has dimension 0");
  if (between_cov.rows() != d || between_cov.cols() != d || within_cov.rows() != d ||
      within_cov.cols() != d)
    throw InvalidInput("PLDA covariance shapes do not match the mean");
  if (!IsSymmetric(between_cov, 1e-10) || !IsSymmetric(within_cov, 1e-10))
    throw InvalidInput("PLDA covariances must be symmetric");
  if (SymEig(between_cov).values.back() < -1e-10 * std::max(1.0, MaxAbs(between_cov)))
    throw InvalidInput("PLDA between-class covariance is not PSD");
  if (!(SymEig(within_cov).values.back() > 0.0))
    throw InvalidInput("PLDA within-class covariance is not PD");
}

double PldaLogLikelihood(const PldaModel& model, const EmbeddingSet& set) {
  return LogLikelihoodOf(model, GroupBySpeaker(set, model.mean));
}

PldaModel FitPlda(const EmbeddingSet& set, const PldaFitOptions& options,
                  PldaFitTrace* trace) {
  if (options.iterations < 0) throw InvalidInput("PLDA iterations must be >= 0");
  if (set.empty()) throw InvalidInput("PLDA training set is empty");
  set.Validate();
  const std::size_t dim = set.dim;

  PldaModel model;
  model.iterations = options.iterations;
  model.mean.assign(dim, 0.0);
  for (const auto& r : set.records)
    kernels::Axpy(1.0 / static_cast<double>(set.size()), r.vector, model.mean);

  GroupedData g = GroupBySpeaker(set, model.mean);
  const double num_speakers = static_cast<double>(g.speakers.size());
  if (g.speakers.size() < 2) throw InvalidInput("PLDA needs at least 2 speakers");
  if (g.total - num_speakers < 1.0)
    throw InvalidInput(
        "PLDA needs a speaker with at least 2 utterances (within-class covariance "
        "is unidentifiable when every speaker is a singleton)");

  // Initialization from the labeled scatter matrices.
  model.within_cov = (1.0 / (g.total - num_speakers)) * g.deviation_scatter;
  model.between_cov = Matrix(dim, dim);
  for (const auto& s : g.speakers)
    AddOuter(1.0 / num_speakers, s.centered_mean, s.centered_mean, &model.between_cov);
  model.between_cov = Symmetrized(model.between_cov);
  int repairs = 0;
  repairs += RepairEigenvalues(&model.within_cov, WithinFloor(model.within_cov),
                               WithinFloor(model.within_cov));
  repairs += RepairEigenvalues(&model.between_cov, 0.0, BetweenTrigger(model.between_cov));

  std::vector<double> lls;
  if (trace) lls.push_back(LogLikelihoodOf(model, g));

  Vector residual(dim);
  for (int iter = 0; iter < options.iterations; ++iter) {
    // E-step: posterior of each speaker variable given its utterance mean,
    //   y_hat = B G^-1 rbar,  C = B - B G^-1 B,  G = B + W / n.
    struct CountTerms {
      Matrix gain;       // B G^-1
      Matrix posterior;  // C
    };
    std::map<double, CountTerms> by_count;
    Matrix between_acc(dim, dim), within_acc = g.deviation_scatter;
    for (const auto& s : g.speakers) {
      auto it = by_count.find(s.count);
      if (it == by_count.end()) {
        Cholesky chol(model.between_cov + (1.0 / s.count) * model.within_cov);
        Matrix gain = Transpose(chol.Solve(model.between_cov));
        Matrix posterior = Symmetrized(model.between_cov - MatMul(gain, model.between_cov));
        it = by_count.emplace(s.count, CountTerms{std::move(gain), std::move(posterior)}).first;
      }
      const CountTerms& terms = it->second;
      Vector y_hat = MatVec(terms.gain, s.centered_mean);
      // M-step accumulators.
      AddOuter(1.0, y_hat, y_hat, &between_acc);
      kernels::Axpy(1.0, terms.posterior.data(), between_acc.data());
      for (std::size_t d = 0; d < dim; ++d) residual[d] = s.centered_mean[d] - y_hat[d];
      AddOuter(s.count, residual, residual, &within_acc);
      kernels::Axpy(s.count, terms.posterior.data(), within_acc.data());
    }
    model.between_cov = Symmetrized((1.0 / num_speakers) * between_acc);
    model.within_cov = Symmetrized((1.0 / g.total) * within_acc);
    const int before = repairs;
    repairs += RepairEigenvalues(&model.between_cov, 0.0, BetweenTrigger(model.between_cov));
    repairs += RepairEigenvalues(&model.within_cov, WithinFloor(model.within_cov),
                                 WithinFloor(model.within_cov));
    if (repairs != before)
      std::cerr << "WARNING: PLDA EM iteration " << iter
                << " produced a non-PSD covariance; eigenvalues clipped\n";
    if (trace) lls.push_back(LogLikelihoodOf(model, g));
  }
  if (trace) {
    trace->log_likelihoods = std::move(lls);
    trace->psd_repairs = repairs;
  }
  return model;
}

PldaScorer::PldaScorer(const PldaModel& model)
    : mean_(model.mean),
      sum_chol_(model.within_cov + 2.0 * model.between_cov),
      diff_chol_(model.within_cov),
      total_chol_(model.within_cov + model.between_cov) {}

double PldaScorer::Score(std::span<const double> enroll,
                         std::span<const double> test) const {
  const std::size_t d = dim();
  if (enroll.size() != d || test.size() != d)
    throw InvalidInput("PLDA scoring: vector dimension does not match model dimension " +
                       std::to_string(d));
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  Vector e(d), t(d), sum(d), diff(d);
  for (std::size_t i = 0; i < d; ++i) {
    e[i] = enroll[i] - mean_[i];
    t[i] = test[i] - mean_[i];
    sum[i] = (e[i] + t[i]) * kInvSqrt2;
    diff[i] = (e[i] - t[i]) * kInvSqrt2;
  }
  // The 2*pi terms cancel between the hypotheses.
  const double same = sum_chol_.LogDet() + sum_chol_.QuadraticForm(sum) +
                      diff_chol_.LogDet() + diff_chol_.QuadraticForm(diff);
  const double different =
      2.0 * total_chol_.LogDet() + (total_chol_.QuadraticForm(e) + total_chol_.QuadraticForm(t));
  return -0.5 * same + 0.5 * different;
}

double PldaScorer::ScoreMulti(std::span<const Vector> enroll,
                              std::span<const double> test) const {
  if (enroll.empty()) throw InvalidInput("PLDA scoring: no enrollment vectors");
  Vector avg(dim(), 0.0);
  for (const Vector& v : enroll) kernels::Axpy(1.0 / static_cast<double>(enroll.size()), v, avg);
  return Score(avg, test);
}

double ScoreLlr(const PldaModel& model, std::span<const double> enroll,
                std::span<const double> test) {
  return PldaScorer(model).Score(enroll, test);
}

PldaModel AdaptPldaUnsupervised(const PldaModel& model, const EmbeddingSet& ood,
                                double alpha_within, double alpha_between,
                                UatReport* report) {
  if (ood.empty()) throw InvalidInput("PLDA-UAT: adaptation set is empty");
  if (ood.dim != model.dim())
    throw InvalidInput("PLDA-UAT: adaptation set dimension does not match the model");
  if (!(alpha_within >= 0.0 && alpha_within <= 1.0) ||
      !(alpha_between >= 0.0 && alpha_between <= 1.0))
    throw InvalidInput("PLDA-UAT: alphas must lie in [0, 1]");
  ood.Validate();

  const std::size_t dim = model.dim();
  const double n = static_cast<double>(ood.size());
  UatReport local;
  UatReport& rep = report ? *report : local;
  rep.rank_deficient = ood.size() < dim + 1;
  if (rep.rank_deficient)
    std::cerr << "WARNING: PLDA-UAT with " << ood.size() << " samples in dimension "
              << dim << "; total covariance is rank deficient, shrinkage applied\n";

  Vector ood_mean(dim, 0.0);
  Matrix total(dim, dim);
  if (ood.size() == 1) {
    ood_mean = ood.records[0].vector;
  } else {
    MeanAndCovariance(ood.Vectors(), &ood_mean, &total);
  }
  rep.shrinkage = static_cast<double>(dim) / (static_cast<double>(dim) + n);
  Matrix shrunk = (1.0 - rep.shrinkage) * total;
  for (std::size_t i = 0; i < dim; ++i) shrunk(i, i) += rep.shrinkage * total(i, i);

  Matrix excess = Symmetrized(shrunk - (model.between_cov + model.within_cov));
  rep.clipped_eigenvalues = ClipEigenvalues(&excess, 0.0);
  rep.excess = excess;

  PldaModel adapted = model;
  adapted.mean = ood_mean;
  if (alpha_within != 0.0)
    adapted.within_cov = Symmetrized(model.within_cov + alpha_within * excess);
  if (alpha_between != 0.0)
    adapted.between_cov = Symmetrized(model.between_cov + alpha_between * excess);
  return adapted;
}

}  // namespace svb
