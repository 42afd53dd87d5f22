// src/numstats/moments.cc

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

#include "svb/moments.h"

#include <algorithm>
#include <cmath>

#include "svb/errors.h"
#include "svb/kernels.h"

namespace svb {

namespace {

std::size_t CheckSamples(std::span<const Vector> samples) {
  if (samples.size() < 2)
    throw InvalidInput("moments need at least 2 samples, got " +
                       std::to_string(samples.size()));
  const std::size_t dim = samples[0].size();
  for (const Vector& s : samples)
    if (s.size() != dim) throw InvalidInput("moments: samples differ in dimension");
  return dim;
}

Vector MeanOf(std::span<const Vector> samples, std::size_t dim) {
  Vector mean(dim, 0.0);
  for (const Vector& s : samples) kernels::Axpy(1.0, s, mean);
  const double inv_n = 1.0 / static_cast<double>(samples.size());
  for (double& m : mean) m *= inv_n;
  return mean;
}

void FillStandardized(std::span<const Vector> samples, MomentSummary* out) {
  const std::size_t dim = out->mean.size();
  const double n = static_cast<double>(samples.size());
  out->skewness.assign(dim, 0.0);
  out->excess_kurtosis.assign(dim, 0.0);
  out->degenerate.assign(dim, false);
  for (std::size_t d = 0; d < dim; ++d) {
    const double mu = out->mean[d];
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (const Vector& s : samples) {
      const double c = s[d] - mu;
      const double c2 = c * c;
      m2 += c2;
      m3 += c2 * c;
      m4 += c2 * c2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    // Constant columns leave only rounding noise in m2.
    if (m2 == 0.0 || m2 <= 1e-24 * mu * mu) {
      out->degenerate[d] = true;
      continue;
    }
    out->skewness[d] = m3 / std::pow(m2, 1.5);
    out->excess_kurtosis[d] = m4 / (m2 * m2) - 3.0;
  }
}

}  // namespace

bool MomentSummary::AnyDegenerate() const {
  return std::any_of(degenerate.begin(), degenerate.end(), [](bool b) { return b; });
}

void MeanAndCovariance(std::span<const Vector> samples, Vector* mean,
                       Matrix* covariance) {
  const std::size_t dim = CheckSamples(samples);
  *mean = MeanOf(samples, dim);
  Matrix cov(dim, dim);
  Vector centered(dim);
  for (const Vector& s : samples) {
    for (std::size_t d = 0; d < dim; ++d) centered[d] = s[d] - (*mean)[d];
    AddOuter(1.0, centered, centered, &cov);
  }
  *covariance = Symmetrized((1.0 / static_cast<double>(samples.size())) * cov);
}

MomentSummary Moments(std::span<const Vector> samples) {
  MomentSummary out;
  MeanAndCovariance(samples, &out.mean, &out.covariance);
  FillStandardized(samples, &out);
  return out;
}

MomentSummary MarginalMoments(std::span<const Vector> samples) {
  const std::size_t dim = CheckSamples(samples);
  MomentSummary out;
  out.mean = MeanOf(samples, dim);
  FillStandardized(samples, &out);
  return out;
}

}  // namespace svb
