// src/synthgen/synthgen.cc

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

#include "svb/synthgen.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <unordered_set>

#include "svb/errors.h"
#include "svb/kernels.h"
#include "svb/linalg.h"

namespace svb {

namespace {

std::mt19937_64 StreamFor(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// exp(m) by scaling and squaring of a truncated Taylor series.
Matrix MatrixExponential(const Matrix& m) {
  const double norm = FrobeniusNorm(m);
  int squarings = 0;
  while (norm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
  const Matrix scaled = (1.0 / std::ldexp(1.0, squarings)) * m;
  Matrix result = Matrix::Identity(m.rows());
  Matrix term = Matrix::Identity(m.rows());
  for (int k = 1; k <= 18; ++k) {
    term = (1.0 / k) * MatMul(term, scaled);
    result = result + term;
  }
  for (int s = 0; s < squarings; ++s) result = MatMul(result, result);
  return result;
}

double Warp(double x, double strength) {
  return x + strength * x * x * x / (1.0 + x * x);
}

std::string SpeakerId(const std::string& prefix, std::size_t s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04zu", s);
  return prefix + buf;
}

}  // namespace

void DomainSpec::Validate() const {
  if (dim == 0) throw InvalidInput("domain spec: dim must be positive");
  if (n_speakers == 0 || utts_per_speaker == 0)
    throw InvalidInput("domain spec: speaker and utterance counts must be positive");
  if (!(between_scale > 0.0) || !(within_scale > 0.0))
    throw InvalidInput("domain spec: scales must be > 0");
  if (!(warp_strength >= 0.0)) throw InvalidInput("domain spec: warp_strength must be >= 0");
  if (!(heavy_tail_dof > 2.0))
    throw InvalidInput("domain spec: heavy_tail_dof must be > 2");
  if (speaker_rank > dim) throw InvalidInput("domain spec: speaker_rank exceeds dim");
  if (speaker_prefix.empty() || speaker_prefix.find_first_of(" \t,") != std::string::npos)
    throw InvalidInput("domain spec: invalid speaker prefix");
  if (shift.affine) {
    const auto& a = *shift.affine;
    if (a.transform.rows() != dim || a.transform.cols() != dim || a.bias.size() != dim)
      throw InvalidInput("domain spec: affine shift shape does not match dim");
    SymEigResult eig = SymEig(Symmetrized(MatMulTransposed(a.transform, a.transform)));
    const double smallest = eig.values.back();
    if (!(smallest > 0.0) || std::sqrt(eig.values.front() / smallest) >= 1e6)
      throw InvalidInput("domain spec: affine transform is singular or ill-conditioned");
  }
  if (!(shift.nonlinear_strength >= 0.0))
    throw InvalidInput("domain spec: nonlinear strength must be >= 0");
}

Matrix SpeakerBasis(std::size_t dim, std::size_t rank, std::uint64_t basis_seed) {
  std::mt19937_64 rng = StreamFor(basis_seed, 0xba515ULL);
  std::normal_distribution<double> normal;
  Matrix basis(dim, rank);
  std::vector<Vector> columns;
  for (std::size_t c = 0; c < rank; ++c) {
    Vector v(dim);
    for (double& x : v) x = normal(rng);
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& prev : columns) kernels::Axpy(-kernels::Dot(prev, v), prev, v);
    const double norm = std::sqrt(kernels::Dot(v, v));
    for (double& x : v) x /= norm;
    columns.push_back(v);
  }
  for (std::size_t c = 0; c < rank; ++c)
    for (std::size_t r = 0; r < dim; ++r) basis(r, c) = columns[c][r];
  return basis;
}

EmbeddingSet GenerateDomain(const DomainSpec& spec) {
  spec.Validate();
  const std::size_t dim = spec.dim;
  const bool low_rank = spec.speaker_rank != 0 && spec.speaker_rank < dim;
  const Matrix basis = low_rank ? SpeakerBasis(dim, spec.speaker_rank, spec.basis_seed)
                                : Matrix();
  const bool gaussian = std::isinf(spec.heavy_tail_dof);
  const double t_scale =
      gaussian ? 1.0 : std::sqrt((spec.heavy_tail_dof - 2.0) / spec.heavy_tail_dof);

  EmbeddingSet set;
  set.dim = dim;
  set.records.reserve(spec.n_speakers * spec.utts_per_speaker);
  Vector latent(low_rank ? spec.speaker_rank : dim);
  Vector shifted(dim);
  for (std::size_t s = 0; s < spec.n_speakers; ++s) {
    std::mt19937_64 rng = StreamFor(spec.seed, s);
    std::normal_distribution<double> normal;
    std::student_t_distribution<double> student(gaussian ? 3.0 : spec.heavy_tail_dof);
    std::chi_squared_distribution<double> chi2(gaussian ? 3.0 : spec.heavy_tail_dof);
    for (double& v : latent) v = spec.between_scale * normal(rng);
    const Vector speaker_mean = low_rank ? MatVec(basis, latent) : latent;
    const std::string spk = SpeakerId(spec.speaker_prefix, s);
    for (std::size_t u = 0; u < spec.utts_per_speaker; ++u) {
      Vector x(dim);
      const double shared =
          gaussian || !spec.shared_tail_scale
              ? 1.0
              : t_scale * std::sqrt(spec.heavy_tail_dof / chi2(rng));
      for (std::size_t d = 0; d < dim; ++d) {
        const double noise = gaussian || spec.shared_tail_scale ? shared * normal(rng)
                                                                : t_scale * student(rng);
        x[d] = Warp(speaker_mean[d] + spec.within_scale * noise, spec.warp_strength);
      }
      if (spec.shift.affine) {
        x = MatVec(spec.shift.affine->transform, x);
        kernels::Axpy(1.0, spec.shift.affine->bias, x);
      }
      if (spec.shift.nonlinear_strength > 0.0) {
        for (std::size_t d = 0; d < dim; ++d)
          shifted[d] = x[d] + spec.shift.nonlinear_strength * std::tanh(x[(d + 1) % dim]);
        x = shifted;
      }
      char utt[16];
      std::snprintf(utt, sizeof(utt), "-u%03zu", u);
      set.records.push_back({spk + utt, spk, std::move(x)});
    }
  }
  return set;
}

AffineShift MakeRandomAffineShift(std::size_t dim, std::uint64_t seed,
                                  double rotation_angle, double scale_min,
                                  double scale_max, double bias_scale) {
  if (dim == 0) throw InvalidInput("affine shift: dim must be positive");
  if (!(scale_min > 0.0) || !(scale_max >= scale_min))
    throw InvalidInput("affine shift: need 0 < scale_min <= scale_max");
  std::mt19937_64 rng = StreamFor(seed, 0xaff1eULL);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(scale_min, scale_max);
  Matrix generator(dim, dim);
  const double norm = 1.0 / std::sqrt(2.0 * static_cast<double>(dim));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j) {
      const double g = normal(rng) * norm * rotation_angle;
      generator(i, j) = g;
      generator(j, i) = -g;
    }
  const Matrix rotation = MatrixExponential(generator);
  AffineShift shift{Matrix(dim, dim), Vector(dim)};
  for (std::size_t i = 0; i < dim; ++i) {
    const double scale = uniform(rng);
    for (std::size_t j = 0; j < dim; ++j) shift.transform(i, j) = scale * rotation(i, j);
  }
  for (double& b : shift.bias) b = bias_scale * normal(rng);
  return shift;
}

std::pair<EmbeddingSet, EmbeddingSet> SplitBySpeaker(const EmbeddingSet& set,
                                                     const SplitSpec& split) {
  std::set<std::string> speakers;
  for (const auto& r : set.records) {
    if (r.speaker_id.empty()) throw InvalidInput("split needs a labeled set");
    speakers.insert(r.speaker_id);
  }
  if (split.adaptation_speakers + split.test_speakers > speakers.size())
    throw InvalidInput("split asks for " +
                       std::to_string(split.adaptation_speakers + split.test_speakers) +
                       " speakers but the set has " + std::to_string(speakers.size()));
  std::map<std::string, int> side;
  std::size_t i = 0;
  for (const auto& spk : speakers) {
    side[spk] = i < split.adaptation_speakers ? 0
                : i < split.adaptation_speakers + split.test_speakers ? 1
                                                                      : 2;
    ++i;
  }
  std::pair<EmbeddingSet, EmbeddingSet> out;
  out.first.dim = out.second.dim = set.dim;
  for (const auto& r : set.records) {
    const int s = side[r.speaker_id];
    if (s == 0) out.first.records.push_back(r);
    else if (s == 1) out.second.records.push_back(r);
  }
  return out;
}

std::vector<Trial> MakeTrials(const EmbeddingSet& set, std::size_t n_target,
                              std::size_t n_nontarget, std::uint64_t seed) {
  if (!set.IsLabeled()) throw InvalidInput("trial generation needs a labeled set");
  std::map<std::string, std::vector<std::size_t>> by_speaker;
  for (std::size_t i = 0; i < set.size(); ++i)
    by_speaker[set.records[i].speaker_id].push_back(i);

  std::vector<std::pair<std::size_t, std::size_t>> target_pairs;
  for (const auto& [spk, idx] : by_speaker)
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b)
        target_pairs.emplace_back(idx[a], idx[b]);
  if (n_target > target_pairs.size())
    throw InvalidInput("requested " + std::to_string(n_target) +
                       " target trials but at most " +
                       std::to_string(target_pairs.size()) + " exist");
  const std::uint64_t n = set.size();
  const std::uint64_t total_nontarget = n * (n - (n > 0 ? 1 : 0)) / 2 - target_pairs.size();
  if (n_nontarget > total_nontarget)
    throw InvalidInput("requested " + std::to_string(n_nontarget) +
                       " nontarget trials but at most " + std::to_string(total_nontarget) +
                       " exist");

  std::mt19937_64 rng(seed);
  std::vector<Trial> trials;
  trials.reserve(n_target + n_nontarget);
  for (std::size_t i = 0; i < n_target; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, target_pairs.size() - 1);
    std::swap(target_pairs[i], target_pairs[pick(rng)]);
    const auto& [a, b] = target_pairs[i];
    trials.push_back({set.records[a].utterance_id, set.records[b].utterance_id, true});
  }

  auto push_nontarget = [&](std::size_t a, std::size_t b) {
    trials.push_back({set.records[a].utterance_id, set.records[b].utterance_id, false});
  };
  if (2 * n_nontarget <= total_nontarget) {
    std::unordered_set<std::uint64_t> seen;
    std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
    while (seen.size() < n_nontarget) {
      std::uint64_t a = pick(rng), b = pick(rng);
      if (a == b || set.records[a].speaker_id == set.records[b].speaker_id) continue;
      if (a > b) std::swap(a, b);
      if (seen.insert(a * n + b).second) push_nontarget(a, b);
    }
  } else {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (set.records[a].speaker_id != set.records[b].speaker_id) pairs.emplace_back(a, b);
    for (std::size_t i = 0; i < n_nontarget; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pairs.size() - 1);
      std::swap(pairs[i], pairs[pick(rng)]);
      push_nontarget(pairs[i].first, pairs[i].second);
    }
  }
  return trials;
}

}  // namespace svb
