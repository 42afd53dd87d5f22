// src/evalkit/evalkit.cc

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

#include "svb/evalkit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "svb/errors.h"
#include "svb/moments.h"

namespace svb {

namespace {

void RequireScores(std::span<const double> targets, std::span<const double> nontargets) {
  if (targets.empty() || nontargets.empty())
    throw InvalidInput("EER needs nonempty target and nontarget score lists");
  for (double s : targets)
    if (std::isnan(s)) throw InvalidInput("NaN target score");
  for (double s : nontargets)
    if (std::isnan(s)) throw InvalidInput("NaN nontarget score");
}

}  // namespace

std::vector<DetPoint> ComputeDet(std::span<const double> target_scores,
                                 std::span<const double> nontarget_scores) {
  RequireScores(target_scores, nontarget_scores);
  std::vector<double> tgt(target_scores.begin(), target_scores.end());
  std::vector<double> non(nontarget_scores.begin(), nontarget_scores.end());
  std::sort(tgt.begin(), tgt.end());
  std::sort(non.begin(), non.end());
  std::vector<double> thresholds;
  thresholds.reserve(tgt.size() + non.size());
  std::merge(tgt.begin(), tgt.end(), non.begin(), non.end(), std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const double num_tgt = static_cast<double>(tgt.size());
  const double num_non = static_cast<double>(non.size());
  std::vector<DetPoint> det;
  det.reserve(thresholds.size());
  std::size_t tgt_below = 0, non_below = 0;
  for (double t : thresholds) {
    while (tgt_below < tgt.size() && tgt[tgt_below] < t) ++tgt_below;
    while (non_below < non.size() && non[non_below] < t) ++non_below;
    det.push_back({t, static_cast<double>(non.size() - non_below) / num_non,
                   static_cast<double>(tgt_below) / num_tgt});
  }
  return det;
}

EerResult ComputeEer(std::span<const double> target_scores,
                     std::span<const double> nontarget_scores) {
  std::vector<DetPoint> det = ComputeDet(target_scores, nontarget_scores);
  // Above every score nothing is accepted.
  det.push_back({std::numeric_limits<double>::infinity(), 0.0, 1.0});
  for (std::size_t i = 0; i < det.size(); ++i) {
    const DetPoint& cur = det[i];
    if (cur.miss < cur.false_accept) continue;
    if (cur.miss == cur.false_accept || i == 0)
      return {cur.false_accept, std::isinf(cur.threshold) ? det[i - 1].threshold
                                                           : cur.threshold};
    const DetPoint& prev = det[i - 1];
    const double gap_prev = prev.false_accept - prev.miss;  // > 0
    const double gap_cur = cur.false_accept - cur.miss;     // < 0
    const double frac = gap_prev / (gap_prev - gap_cur);
    const double eer = prev.false_accept + frac * (cur.false_accept - prev.false_accept);
    const double threshold = std::isinf(cur.threshold)
                                 ? prev.threshold
                                 : prev.threshold + frac * (cur.threshold - prev.threshold);
    return {eer, threshold};
  }
  // Unreachable: the sentinel point always has miss >= false_accept.
  throw NumericError("EER sweep found no crossing");
}

void Evaluate(ScoreReport* report) {
  std::vector<double> tgt, non;
  for (const auto& s : report->scores) {
    if (!s.is_target) return;
    (*s.is_target ? tgt : non).push_back(s.score);
  }
  if (tgt.empty() || non.empty()) return;
  report->eer = ComputeEer(tgt, non);
  report->det = ComputeDet(tgt, non);
}

ScoreReport ScoreTrials(const Normalizer* normalizer, const PldaModel& plda,
                        const EmbeddingSet& embeddings, std::span<const Trial> trials) {
  ScoreReport report;
  if (trials.empty()) return report;
  const auto index = embeddings.IndexById();
  std::vector<std::pair<std::size_t, std::size_t>> resolved;
  resolved.reserve(trials.size());
  for (const auto& t : trials) {
    auto e = index.find(t.enroll);
    if (e == index.end()) throw InvalidInput("unknown utterance id '" + t.enroll + "'");
    auto s = index.find(t.test);
    if (s == index.end()) throw InvalidInput("unknown utterance id '" + t.test + "'");
    resolved.emplace_back(e->second, s->second);
  }
  const EmbeddingSet normalized =
      normalizer ? ApplyNormalizer(*normalizer, embeddings) : embeddings;
  if (normalized.dim != plda.dim())
    throw InvalidInput("normalized dimension " + std::to_string(normalized.dim) +
                       " does not match PLDA dimension " + std::to_string(plda.dim()));
  PldaScorer scorer(plda);
  report.scores.reserve(trials.size());
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const auto& [e, t] = resolved[i];
    report.scores.push_back({trials[i].enroll, trials[i].test,
                             scorer.Score(normalized.records[e].vector,
                                          normalized.records[t].vector),
                             trials[i].is_target});
  }
  Evaluate(&report);
  return report;
}

GaussianityReport ComputeGaussianity(const EmbeddingSet& set) {
  if (set.size() < 3)
    throw InvalidInput("Gaussianity diagnostics need at least 3 vectors, got " +
                       std::to_string(set.size()));
  const std::vector<Vector> vectors = set.Vectors();
  MomentSummary m = MarginalMoments(vectors);
  GaussianityReport r;
  r.skewness = m.skewness;
  r.kurtosis = m.excess_kurtosis;
  r.degenerate = m.degenerate;
  const double d = static_cast<double>(set.dim);
  for (std::size_t i = 0; i < set.dim; ++i) {
    r.aggregate_skew += r.skewness[i] / d;
    r.aggregate_kurt += r.kurtosis[i] / d;
    r.mean_abs_skew += std::fabs(r.skewness[i]) / d;
    r.mean_abs_kurt += std::fabs(r.kurtosis[i]) / d;
  }
  std::vector<Vector> pooled;
  pooled.reserve(vectors.size() * set.dim);
  for (const Vector& v : vectors)
    for (double x : v) pooled.push_back({x});
  MomentSummary p = MarginalMoments(pooled);
  r.pooled_skew = p.skewness[0];
  r.pooled_kurt = p.excess_kurtosis[0];
  return r;
}

void WriteMetricsCsv(std::span<const std::pair<std::string, double>> metrics,
                     const std::filesystem::path& path) {
  std::string out = "metric,value\n";
  for (const auto& [name, value] : metrics) out += name + "," + FormatDouble(value) + "\n";
  WriteFileBytes(path, out);
}

void WriteDetCsv(std::span<const DetPoint> det, const std::filesystem::path& path) {
  std::string out = "threshold,far,frr\n";
  for (const auto& p : det)
    out += FormatDouble(p.threshold) + "," + FormatDouble(p.false_accept) + "," +
           FormatDouble(p.miss) + "\n";
  WriteFileBytes(path, out);
}

std::string GaussianityCsv(const GaussianityReport& report) {
  std::string out = "dim,skewness,kurtosis,degenerate\n";
  for (std::size_t i = 0; i < report.skewness.size(); ++i)
    out += std::to_string(i) + "," + FormatDouble(report.skewness[i]) + "," +
           FormatDouble(report.kurtosis[i]) + "," + (report.degenerate[i] ? "1" : "0") +
           "\n";
  out += "aggregate," + FormatDouble(report.aggregate_skew) + "," +
         FormatDouble(report.aggregate_kurt) + ",\n";
  out += "mean_abs," + FormatDouble(report.mean_abs_skew) + "," +
         FormatDouble(report.mean_abs_kurt) + ",\n";
  out += "pooled," + FormatDouble(report.pooled_skew) + "," +
         FormatDouble(report.pooled_kurt) + ",\n";
  return out;
}

}  // namespace svb
