// include/svb/normalizer.h

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

#ifndef SVB_NORMALIZER_H_
#define SVB_NORMALIZER_H_

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "svb/dataio.h"
#include "svb/linear_norm.h"
#include "svb/vae.h"

namespace svb {

/// Pass-through normalizer of the Baseline system.
struct IdentityNormalizer {
  std::size_t dim = 0;
  bool operator==(const IdentityNormalizer&) const = default;
};

/// The middle component between the embeddings and PLDA.
using Normalizer = std::variant<IdentityNormalizer, PcaModel, LdaModel, VaeModel>;

enum class NormalizerKind { kNone, kPca, kLda, kVae, kCvae };

std::string_view NormalizerKindName(NormalizerKind kind);
/// Accepts none|baseline, pca, lda, vae, cvae|c-vae.
NormalizerKind ParseNormalizerKind(std::string_view name);
/// Kind of a fitted normalizer (VAE models with a cohesive weight are C-VAE).
NormalizerKind KindOf(const Normalizer& normalizer);

struct NormalizerParams {
  std::size_t linear_dim = 8;  // PCA / LDA output dimension
  VaeConfig vae;               // cohesive_weight is overridden per kind
  double cvae_cohesive_weight = 0.1;
  // Epoch override for VAE re-training on adaptation data.
  std::optional<int> vae_adapt_epochs;
};

struct NormalizerFit {
  Normalizer model;
  std::vector<double> loss_log;  // VAE per-epoch losses, empty otherwise
};

NormalizerFit FitNormalizer(NormalizerKind kind, const EmbeddingSet& set,
                            const NormalizerParams& params);

/// Re-fits the normalizer on adaptation data: PCA/LDA from scratch with
/// the same output dimension, VAE/C-VAE re-trained with the original config.
NormalizerFit AdaptNormalizer(const Normalizer& normalizer, const EmbeddingSet& set,
                              const NormalizerParams& params);

EmbeddingSet ApplyNormalizer(const Normalizer& normalizer, const EmbeddingSet& set);
std::size_t NormalizerInputDim(const Normalizer& normalizer);
std::size_t NormalizerOutputDim(const Normalizer& normalizer);

}  // namespace svb

#endif  // SVB_NORMALIZER_H_
