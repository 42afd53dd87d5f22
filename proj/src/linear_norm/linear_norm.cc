// src/linear_norm/linear_norm.cc

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

#include "svb/linear_norm.h"

#include <cmath>
#include <map>
#include <string>

#include "svb/errors.h"
#include "svb/kernels.h"
#include "svb/linalg.h"
#include "svb/moments.h"

namespace svb {

namespace {

constexpr double kLdaRidgeFactor = 1e-6;
constexpr double kDegenerateEigenvalue = 1e-10;

EmbeddingSet ProjectSet(const Vector& mean, const Matrix& projection,
                        const EmbeddingSet& set) {
  if (set.dim != mean.size())
    throw InvalidInput("transform: input dimension " + std::to_string(set.dim) +
                       " does not match model dimension " +
                       std::to_string(mean.size()));
  EmbeddingSet out;
  out.dim = projection.rows();
  out.records.reserve(set.size());
  for (const auto& r : set.records)
    out.records.push_back(
        {r.utterance_id, r.speaker_id, ApplyProjection(mean, projection, r.vector)});
  return out;
}

}  // namespace

Vector ApplyProjection(const Vector& mean, const Matrix& projection,
                       std::span<const double> x) {
  if (x.size() != mean.size()) throw InvalidInput("transform: dimension mismatch");
  Vector centered(x.begin(), x.end());
  kernels::Axpy(-1.0, mean, centered);
  return MatVec(projection, centered);
}

PcaModel FitPca(const EmbeddingSet& set, std::size_t k) {
  if (k == 0) throw InvalidInput("fit_pca: k must be positive");
  if (k > set.dim)
    throw InvalidInput("fit_pca: k=" + std::to_string(k) + " exceeds dimension " +
                       std::to_string(set.dim));
  if (set.size() < k + 1)
    throw InvalidInput("fit_pca: need at least k+1=" + std::to_string(k + 1) +
                       " records, got " + std::to_string(set.size()));
  set.Validate();

  PcaModel model;
  Matrix covariance;
  MeanAndCovariance(set.Vectors(), &model.mean, &covariance);
  SymEigResult eig = SymEig(covariance);
  model.eigenvalues = eig.values;
  model.projection = Matrix(k, set.dim);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < set.dim; ++j) model.projection(i, j) = eig.vectors(j, i);
  return model;
}

LdaModel FitLda(const EmbeddingSet& set, std::size_t k) {
  if (k == 0) throw InvalidInput("fit_lda: k must be positive");
  if (!set.IsLabeled()) throw InvalidInput("fit_lda: every record needs a speaker id");
  set.Validate();

  std::map<std::string, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < set.size(); ++i)
    classes[set.records[i].speaker_id].push_back(i);
  if (classes.size() < 2) throw InvalidInput("fit_lda: need at least 2 classes");
  for (const auto& [spk, members] : classes)
    if (members.size() < 2)
      throw InvalidInput("fit_lda: class '" + spk + "' has fewer than 2 samples");
  if (k >= classes.size())
    throw InvalidInput("fit_lda: k=" + std::to_string(k) +
                       " must be below the number of classes (" +
                       std::to_string(classes.size()) + ")");
  if (k > set.dim) throw InvalidInput("fit_lda: k exceeds dimension");

  const std::size_t dim = set.dim;
  const double n = static_cast<double>(set.size());
  LdaModel model;
  model.mean.assign(dim, 0.0);
  for (const auto& r : set.records) kernels::Axpy(1.0 / n, r.vector, model.mean);

  Matrix within(dim, dim), between(dim, dim);
  Vector class_mean(dim), centered(dim);
  for (const auto& [spk, members] : classes) {
    const double count = static_cast<double>(members.size());
    std::fill(class_mean.begin(), class_mean.end(), 0.0);
    for (std::size_t i : members)
      kernels::Axpy(1.0 / count, set.records[i].vector, class_mean);
    for (std::size_t i : members) {
      for (std::size_t d = 0; d < dim; ++d)
        centered[d] = set.records[i].vector[d] - class_mean[d];
      AddOuter(1.0 / n, centered, centered, &within);
    }
    for (std::size_t d = 0; d < dim; ++d) centered[d] = class_mean[d] - model.mean[d];
    AddOuter(count / n, centered, centered, &between);
  }
  within = Symmetrized(within);
  between = Symmetrized(between);

  model.ridge = kLdaRidgeFactor * Trace(within) / static_cast<double>(dim);
  if (!(model.ridge > 0.0)) model.ridge = kLdaRidgeFactor;
  for (std::size_t d = 0; d < dim; ++d) within(d, d) += model.ridge;

  // whitening = D^{-1/2} E^T
  SymEigResult within_eig = SymEig(within);
  Matrix whitening(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const double lambda = within_eig.values[i];
    if (!(lambda > 0.0))
      throw NumericError("fit_lda: within-class scatter is not positive definite");
    const double s = 1.0 / std::sqrt(lambda);
    for (std::size_t j = 0; j < dim; ++j) whitening(i, j) = s * within_eig.vectors(j, i);
  }
  Matrix whitened_between =
      Symmetrized(MatMulTransposed(MatMul(whitening, between), whitening));
  SymEigResult between_eig = SymEig(whitened_between);
  model.eigenvalues = between_eig.values;
  model.degenerate = between_eig.values.front() <= kDegenerateEigenvalue;

  Matrix directions(k, dim);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < dim; ++j) directions(i, j) = between_eig.vectors(j, i);
  model.projection = MatMul(directions, whitening);
  return model;
}

EmbeddingSet Transform(const PcaModel& model, const EmbeddingSet& set) {
  return ProjectSet(model.mean, model.projection, set);
}

EmbeddingSet Transform(const LdaModel& model, const EmbeddingSet& set) {
  return ProjectSet(model.mean, model.projection, set);
}

EmbeddingSet LengthNormalize(const EmbeddingSet& set) {
  EmbeddingSet out = set;
  const double target = std::sqrt(static_cast<double>(set.dim));
  for (auto& r : out.records) {
    const double norm = std::sqrt(kernels::Dot(r.vector, r.vector));
    if (norm > 0.0)
      for (double& v : r.vector) v *= target / norm;
  }
  return out;
}

}  // namespace svb
