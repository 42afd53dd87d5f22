// include/svb/pipeline.h

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

#ifndef SVB_PIPELINE_H_
#define SVB_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svb/normalizer.h"
#include "svb/synthgen.h"

namespace svb {

/// Back-end adaptation applied on the out-of-domain adaptation split.
enum class AdaptationMode { kNone, kPldaRet, kPldaUat, kNormAdapt, kNormAdaptPldaRet };

std::string_view AdaptationModeName(AdaptationMode mode);
AdaptationMode ParseAdaptationMode(std::string_view name);

/// Normalizer settings of the desk preset: codes sized to the speaker
/// subspace, longer VAE training than the library defaults.
inline NormalizerParams DeskNormalizerParams() {
  NormalizerParams p;
  p.linear_dim = 4;
  p.vae.latent_dim = 4;
  p.vae.epochs = 100;
  p.vae_adapt_epochs = 200;
  return p;
}

/// Everything an experiment run depends on. Serialized as flat
/// `key = value` text; unknown keys are rejected.
struct PipelineConfig {
  // In-domain population.
  std::size_t dim = 32;
  std::size_t ind_train_speakers = 200;
  std::size_t ind_test_speakers = 100;
  std::size_t utts_per_speaker = 10;
  double between_scale = 1.0;
  double within_scale = 0.5;
  double warp_strength = 0.5;
  double heavy_tail_dof = 5.0;
  bool shared_tail_scale = true;
  std::size_t speaker_rank = 4;

  // Out-of-domain population and its speaker split.
  std::size_t ood_speakers = 73;
  std::size_t adapt_speakers = 40;
  std::size_t test_speakers = 33;
  double ood_within_scale = 0.6;
  double ood_rotation = 0.3;
  double ood_scale_min = 0.5;
  double ood_scale_max = 2.0;
  double ood_bias = 3.0;
  double ood_nonlinear = 0.5;

  std::size_t n_target = 1400;
  std::size_t n_nontarget = 8000;

  std::vector<NormalizerKind> systems = {NormalizerKind::kNone, NormalizerKind::kPca,
                                         NormalizerKind::kLda, NormalizerKind::kVae,
                                         NormalizerKind::kCvae};
  std::vector<AdaptationMode> adaptation_modes = {
      AdaptationMode::kPldaRet, AdaptationMode::kPldaUat,
      AdaptationMode::kNormAdaptPldaRet};
  NormalizerParams normalizer = DeskNormalizerParams();
  bool length_norm = false;
  int plda_iterations = 10;
  double uat_alpha_within = 0.5;
  double uat_alpha_between = 0.5;

  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::size_t jobs = 1;  // replicas run concurrently

  /// Sets one key from its text value; throws InvalidInput for unknown keys
  /// or bad values.
  void Set(std::string_view key, std::string_view value);
  /// Every key with its current value, in a fixed order.
  std::vector<std::pair<std::string, std::string>> Entries() const;
  /// `key = value` lines.
  std::string ToText() const;
};

/// Named presets: "desk" (the defaults above) and "full" (512-dim
/// embeddings, 150-dim linear codes, the full-size VAE).
PipelineConfig PresetConfig(std::string_view name);

/// Parses `key = value` lines ('#' starts a comment) on top of `base`.
PipelineConfig ParseConfigText(std::string_view text, PipelineConfig base);

/// In-domain and out-of-domain data of one replica.
struct ExperimentData {
  EmbeddingSet ind_train;
  EmbeddingSet ind_test;
  EmbeddingSet ood_adapt;
  EmbeddingSet ood_test;
  std::vector<Trial> ind_trials;
  std::vector<Trial> ood_trials;
};

DomainSpec IndDomainSpec(const PipelineConfig& config, std::uint64_t seed, bool test);
DomainSpec OodDomainSpec(const PipelineConfig& config, std::uint64_t seed);
ExperimentData GenerateExperimentData(const PipelineConfig& config, std::uint64_t seed);

/// Condition labels used in results: "IND", "OOD" (unadapted PLDA on the
/// OOD test split), then one per adaptation mode.
inline constexpr std::string_view kCondInd = "IND";
inline constexpr std::string_view kCondOod = "OOD";

struct EerCell {
  std::uint64_t seed = 0;
  NormalizerKind system = NormalizerKind::kNone;
  std::string condition;
  double eer = 0.0;
};

/// Group "raw" has system kNone; "original" / "adapted" are normalized
/// OOD test vectors before / after normalizer re-training.
struct GaussianityCell {
  std::uint64_t seed = 0;
  std::string group;
  NormalizerKind system = NormalizerKind::kNone;
  double aggregate_skew = 0.0;
  double aggregate_kurt = 0.0;
  double mean_abs_skew = 0.0;
  double mean_abs_kurt = 0.0;
};

struct ExperimentResult {
  PipelineConfig config;
  std::vector<EerCell> eers;
  std::vector<GaussianityCell> gaussianity;

  std::vector<double> EersOf(NormalizerKind system, std::string_view condition) const;
  std::optional<double> MedianEer(NormalizerKind system, std::string_view condition) const;
  std::vector<const GaussianityCell*> GaussianityOf(std::string_view group,
                                                    NormalizerKind system) const;
};

/// One replica: every configured system under every configured condition.
ExperimentResult RunReplica(const PipelineConfig& config, std::uint64_t seed);

/// All seeds (possibly concurrently); cells are ordered by seed.
ExperimentResult RunExperiment(const PipelineConfig& config);

double Median(std::vector<double> values);
/// Linear-interpolated quantile, q in [0, 1].
double Quantile(std::vector<double> values, double q);

std::string ResultsCsv(const ExperimentResult& result);
std::string GaussianityResultsCsv(const ExperimentResult& result);
/// Markdown tables: IND vs OOD, PLDA adaptation, normalizer adaptation,
/// skewness/kurtosis.
std::string ResultsMarkdown(const ExperimentResult& result);

/// Writes results.csv, gaussianity.csv, results.md and config.resolved.
void WriteExperimentOutputs(const ExperimentResult& result,
                            const std::filesystem::path& dir);

}  // namespace svb

#endif  // SVB_PIPELINE_H_
