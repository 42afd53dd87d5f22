// src/evalkit/normalizer.cc

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

#include "svb/normalizer.h"

#include <string>

#include "svb/errors.h"

namespace svb {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

VaeConfig VaeConfigFor(NormalizerKind kind, const NormalizerParams& params) {
  VaeConfig cfg = params.vae;
  cfg.cohesive_weight = kind == NormalizerKind::kCvae ? params.cvae_cohesive_weight : 0.0;
  return cfg;
}

}  // namespace

std::string_view NormalizerKindName(NormalizerKind kind) {
  switch (kind) {
    case NormalizerKind::kNone: return "none";
    case NormalizerKind::kPca: return "pca";
    case NormalizerKind::kLda: return "lda";
    case NormalizerKind::kVae: return "vae";
    case NormalizerKind::kCvae: return "cvae";
  }
  return "unknown";
}

NormalizerKind ParseNormalizerKind(std::string_view name) {
  if (name == "none" || name == "baseline") return NormalizerKind::kNone;
  if (name == "pca") return NormalizerKind::kPca;
  if (name == "lda") return NormalizerKind::kLda;
  if (name == "vae") return NormalizerKind::kVae;
  if (name == "cvae" || name == "c-vae") return NormalizerKind::kCvae;
  throw InvalidInput("unknown normalizer kind '" + std::string(name) + "'");
}

NormalizerKind KindOf(const Normalizer& normalizer) {
  return std::visit(
      Overloaded{
          [](const IdentityNormalizer&) { return NormalizerKind::kNone; },
          [](const PcaModel&) { return NormalizerKind::kPca; },
          [](const LdaModel&) { return NormalizerKind::kLda; },
          [](const VaeModel& m) {
            return m.cohesive_weight > 0.0 ? NormalizerKind::kCvae : NormalizerKind::kVae;
          },
      },
      normalizer);
}

NormalizerFit FitNormalizer(NormalizerKind kind, const EmbeddingSet& set,
                            const NormalizerParams& params) {
  switch (kind) {
    case NormalizerKind::kNone:
      return {IdentityNormalizer{set.dim}, {}};
    case NormalizerKind::kPca:
      return {FitPca(set, params.linear_dim), {}};
    case NormalizerKind::kLda:
      return {FitLda(set, params.linear_dim), {}};
    case NormalizerKind::kVae:
    case NormalizerKind::kCvae: {
      VaeTrainResult r = TrainVae(set, VaeConfigFor(kind, params));
      return {std::move(r.model), std::move(r.epoch_losses)};
    }
  }
  throw InvalidInput("unknown normalizer kind");
}

NormalizerFit AdaptNormalizer(const Normalizer& normalizer, const EmbeddingSet& set,
                              const NormalizerParams& params) {
  return std::visit(
      Overloaded{
          [&](const IdentityNormalizer& m) -> NormalizerFit { return {m, {}}; },
          [&](const PcaModel& m) -> NormalizerFit {
            return {FitPca(set, m.output_dim()), {}};
          },
          [&](const LdaModel& m) -> NormalizerFit {
            return {FitLda(set, m.output_dim()), {}};
          },
          [&](const VaeModel& m) -> NormalizerFit {
            VaeAdaptConfig adapt{VaeAdaptMode::kRetrain, params.vae_adapt_epochs};
            VaeTrainResult r = AdaptVae(m, set, adapt);
            return {std::move(r.model), std::move(r.epoch_losses)};
          },
      },
      normalizer);
}

EmbeddingSet ApplyNormalizer(const Normalizer& normalizer, const EmbeddingSet& set) {
  return std::visit(
      Overloaded{
          [&](const IdentityNormalizer& m) {
            if (set.dim != m.dim)
              throw InvalidInput("identity normalizer: dimension " +
                                 std::to_string(set.dim) + " != " + std::to_string(m.dim));
            return set;
          },
          [&](const PcaModel& m) { return Transform(m, set); },
          [&](const LdaModel& m) { return Transform(m, set); },
          [&](const VaeModel& m) { return Normalize(m, set); },
      },
      normalizer);
}

std::size_t NormalizerInputDim(const Normalizer& normalizer) {
  return std::visit(Overloaded{[](const IdentityNormalizer& m) { return m.dim; },
                               [](const auto& m) { return m.input_dim(); }},
                    normalizer);
}

std::size_t NormalizerOutputDim(const Normalizer& normalizer) {
  return std::visit(Overloaded{[](const IdentityNormalizer& m) { return m.dim; },
                               [](const auto& m) { return m.output_dim(); }},
                    normalizer);
}

}  // namespace svb
