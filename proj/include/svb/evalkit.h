// include/svb/evalkit.h

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

#ifndef SVB_EVALKIT_H_
#define SVB_EVALKIT_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "svb/dataio.h"
#include "svb/normalizer.h"
#include "svb/plda.h"

namespace svb {

struct DetPoint {
  double threshold = 0.0;
  double false_accept = 0.0;  // fraction of nontargets scoring >= threshold
  double miss = 0.0;          // fraction of targets scoring < threshold
};

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

struct ScoreReport {
  std::vector<TrialScore> scores;
  std::optional<EerResult> eer;  // present when both classes are labeled
  std::vector<DetPoint> det;
};

/// Equal error rate over a sweep of every distinct score as threshold.
/// The crossing is interpolated linearly between the two operating points
/// that straddle it; ties resolve to the lower threshold. Throws
/// InvalidInput if either list is empty.
EerResult ComputeEer(std::span<const double> target_scores,
                     std::span<const double> nontarget_scores);

/// One operating point per distinct score, ascending threshold.
std::vector<DetPoint> ComputeDet(std::span<const double> target_scores,
                                 std::span<const double> nontarget_scores);

/// Normalizes the embeddings (when a normalizer is given) and scores every
/// trial with the PLDA log-likelihood ratio. Unresolved utterance ids raise
/// InvalidInput naming the id.
ScoreReport ScoreTrials(const Normalizer* normalizer, const PldaModel& plda,
                        const EmbeddingSet& embeddings, std::span<const Trial> trials);

/// Fills eer/det from labeled scores (no-op when labels are missing).
void Evaluate(ScoreReport* report);

/// Per-dimension skewness / excess kurtosis over utterances.
struct GaussianityReport {
  Vector skewness;
  Vector kurtosis;
  std::vector<bool> degenerate;
  double aggregate_skew = 0.0;  // mean of per-dimension skewness
  double aggregate_kurt = 0.0;  // mean of per-dimension kurtosis
  double mean_abs_skew = 0.0;   // mean of |per-dimension skewness|
  double mean_abs_kurt = 0.0;
  double pooled_skew = 0.0;     // all entries pooled into one distribution
  double pooled_kurt = 0.0;
};

GaussianityReport ComputeGaussianity(const EmbeddingSet& set);

void WriteMetricsCsv(std::span<const std::pair<std::string, double>> metrics,
                     const std::filesystem::path& path);
void WriteDetCsv(std::span<const DetPoint> det, const std::filesystem::path& path);
/// dim,skewness,kurtosis rows followed by the aggregates.
std::string GaussianityCsv(const GaussianityReport& report);

}  // namespace svb

#endif  // SVB_EVALKIT_H_
