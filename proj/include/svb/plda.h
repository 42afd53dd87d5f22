// include/svb/plda.h

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

#ifndef SVB_PLDA_H_
#define SVB_PLDA_H_

#include <span>
#include <vector>

#include "svb/dataio.h"
#include "svb/linalg.h"
#include "svb/matrix.h"

namespace svb {

/// Two-covariance PLDA: x = mean + y + e with speaker variable
/// y ~ N(0, between_cov) and residual e ~ N(0, within_cov).
struct PldaModel {
  Vector mean;
  Matrix between_cov;
  Matrix within_cov;
  int iterations = 0;  // EM iterations used at fit time

  std::size_t dim() const { return mean.size(); }
  /// Shapes, symmetry (1e-10), PSD between_cov, PD within_cov.
  void Validate() const;
  bool operator==(const PldaModel&) const = default;
};

struct PldaFitOptions {
  int iterations = 10;
};

struct PldaFitTrace {
  // log_likelihoods[0] is the initialization, then one entry per iteration.
  std::vector<double> log_likelihoods;
  int psd_repairs = 0;
};

/// EM training on a labeled set, started from the labeled scatter matrices.
/// Needs at least two speakers and one speaker with two utterances.
PldaModel FitPlda(const EmbeddingSet& set, const PldaFitOptions& options,
                  PldaFitTrace* trace = nullptr);

/// Exact marginal log-likelihood of a labeled set with each speaker's
/// latent variable integrated out.
double PldaLogLikelihood(const PldaModel& model, const EmbeddingSet& set);

/// Same-speaker vs different-speaker log-likelihood ratio scorer. Factors
/// the three covariances it needs once.
class PldaScorer {
 public:
  explicit PldaScorer(const PldaModel& model);

  std::size_t dim() const { return mean_.size(); }
  /// ln N([e;t] | [[T,B],[B,T]]) - ln N(e | T) - ln N(t | T), with
  /// T = B + W, evaluated on the rotated pair (e+t)/sqrt2, (e-t)/sqrt2.
  double Score(std::span<const double> enroll, std::span<const double> test) const;
  /// Multi-session enrollment: the enrollment vectors are averaged first.
  double ScoreMulti(std::span<const Vector> enroll, std::span<const double> test) const;

 private:
  Vector mean_;
  Cholesky sum_chol_;    // T + B
  Cholesky diff_chol_;   // T - B = W
  Cholesky total_chol_;  // T
};

double ScoreLlr(const PldaModel& model, std::span<const double> enroll,
                std::span<const double> test);

struct UatReport {
  bool rank_deficient = false;  // fewer than dim + 1 samples
  double shrinkage = 0.0;       // gamma = d / (d + n)
  int clipped_eigenvalues = 0;  // negative eigenvalues removed from the excess
  Matrix excess;                // PSD part of the excess covariance
};

/// Unsupervised adaptation from unlabeled out-of-domain data: the PSD part
/// of (shrunk OOD total covariance - (B + W)) is added to W and B with
/// weights alpha_within and alpha_between, and the mean moves to the OOD mean.
PldaModel AdaptPldaUnsupervised(const PldaModel& model, const EmbeddingSet& ood,
                                double alpha_within, double alpha_between,
                                UatReport* report = nullptr);

}  // namespace svb

#endif  // SVB_PLDA_H_
