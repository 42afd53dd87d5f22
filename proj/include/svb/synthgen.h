// include/svb/synthgen.h

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

#ifndef SVB_SYNTHGEN_H_
#define SVB_SYNTHGEN_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "svb/dataio.h"
#include "svb/matrix.h"

namespace svb {

struct AffineShift {
  Matrix transform;  // d x d, invertible
  Vector bias;
};

/// Domain shift applied after warping: optional affine map x <- A x + b,
/// then x_i <- x_i + strength * tanh(x_{(i+1) mod d}).
struct DomainShift {
  std::optional<AffineShift> affine;
  double nonlinear_strength = 0.0;
};

/// Parameters of a synthetic embedding population.
struct DomainSpec {
  std::size_t dim = 32;
  std::size_t n_speakers = 200;
  std::size_t utts_per_speaker = 10;
  double between_scale = 1.0;
  double within_scale = 1.0;
  double warp_strength = 0.0;
  // Within-speaker noise is Student-t with this many degrees of freedom,
  // rescaled to variance within_scale^2. Infinity means Gaussian.
  double heavy_tail_dof = std::numeric_limits<double>::infinity();
  // When set, one chi-square draw scales the whole noise vector of an
  // utterance (multivariate t); otherwise every coordinate draws its own.
  bool shared_tail_scale = false;
  // Speaker means live in a random subspace of this rank (0 = full rank).
  std::size_t speaker_rank = 0;
  // Seed of the speaker subspace; shared by domains that model the same
  // embedding extractor.
  std::uint64_t basis_seed = 0;
  DomainShift shift;
  std::uint64_t seed = 1;
  std::string speaker_prefix = "spk";

  /// Throws InvalidInput.
  void Validate() const;
};

/// Labeled population: speaker means ~ N(0, between^2 I) (within the
/// speaker subspace when speaker_rank < dim), utterance = mean + noise, then
/// the elementwise warp x + w x^3 / (1 + x^2), then the domain shift.
/// Speaker s draws from a stream seeded by (seed, s).
EmbeddingSet GenerateDomain(const DomainSpec& spec);

/// Orthonormal d x r basis of the speaker subspace used by GenerateDomain.
Matrix SpeakerBasis(std::size_t dim, std::size_t rank, std::uint64_t basis_seed);

/// Random rotation R = exp(angle * S) for a random unit-norm skew-symmetric
/// generator S, times per-dimension scales drawn uniformly from
/// [scale_min, scale_max], plus a bias ~ N(0, bias_scale^2 I).
AffineShift MakeRandomAffineShift(std::size_t dim, std::uint64_t seed,
                                  double rotation_angle, double scale_min,
                                  double scale_max, double bias_scale);

struct SplitSpec {
  std::size_t adaptation_speakers = 40;
  std::size_t test_speakers = 33;
};

/// Speaker-disjoint split in speaker-id order.
std::pair<EmbeddingSet, EmbeddingSet> SplitBySpeaker(const EmbeddingSet& set,
                                                     const SplitSpec& split);

/// Uniformly samples distinct same-speaker (target) and cross-speaker
/// (nontarget) utterance pairs without replacement.
std::vector<Trial> MakeTrials(const EmbeddingSet& set, std::size_t n_target,
                              std::size_t n_nontarget, std::uint64_t seed);

}  // namespace svb

#endif  // SVB_SYNTHGEN_H_
