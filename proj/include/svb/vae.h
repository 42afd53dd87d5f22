// include/svb/vae.h

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

#ifndef SVB_VAE_H_
#define SVB_VAE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "svb/adam.h"
#include "svb/dataio.h"
#include "svb/mlp.h"

namespace svb {

/// Training hyperparameters. cohesive_weight = 0 trains a plain VAE,
/// cohesive_weight > 0 a C-VAE (needs speaker labels).
struct VaeConfig {
  std::size_t latent_dim = 8;
  std::vector<std::size_t> hidden = {64, 64};
  int epochs = 50;
  std::size_t batch_size = 128;
  double learning_rate = 1e-3;
  double finetune_learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double cohesive_weight = 0.0;
  std::uint64_t seed = 1;

  bool operator==(const VaeConfig&) const = default;
};

/// Full-size architecture: 512 -> 1800 -> 1800 -> [200] -> 1800 -> 1800 -> 512.
VaeConfig FullScaleVaeConfig();

enum class VaeAdaptMode : std::uint8_t { kNone = 0, kRetrain = 1, kFinetune = 2 };

std::string_view AdaptModeName(VaeAdaptMode mode);

/// Encoder g(x) emits [mu(x), log-variance(x)] (2k outputs); decoder f(z)
/// maps the k-dim code back to the input space. Inputs are standardized
/// per dimension with the training-set statistics stored here.
struct VaeModel {
  MlpNetwork encoder;
  MlpNetwork decoder;
  std::size_t latent_dim = 0;
  double cohesive_weight = 0.0;
  std::uint64_t train_seed = 0;
  Vector input_mean;
  Vector input_scale;
  VaeConfig config;
  VaeAdaptMode adapt_mode = VaeAdaptMode::kNone;

  std::size_t input_dim() const { return input_mean.size(); }
  std::size_t output_dim() const { return latent_dim; }
  /// Shape invariants; throws InvalidInput.
  void Validate() const;
  bool operator==(const VaeModel&) const = default;
};

/// Log-variance is clamped to this range before exponentiation.
inline constexpr double kLogVarMin = -10.0;
inline constexpr double kLogVarMax = 10.0;

/// Closed-form KL(N(mu, sigma^2) || N(0, 1)) for one dimension.
double GaussianKl(double mu, double log_var);

struct VaeGradients {
  std::vector<LayerGradient> encoder;
  std::vector<LayerGradient> decoder;
};

struct ElboResult {
  double loss = 0.0;            // kl + reconstruction + cohesive
  double kl = 0.0;              // batch mean
  double reconstruction = 0.0;  // batch mean of 0.5 * |x - f(z)|^2
  double cohesive = 0.0;        // weighted cohesive term
  VaeGradients grads;
};

/// Negative ELBO on a batch (one sample per row, raw input space) with a
/// single reparameterized draw z = mu + sigma * noise per row:
///   mean_i [ KL(q(z|x_i) || N(0, I)) + 0.5 |x_i - f(z_i)|^2 ]
///     + lambda * mean_i |mu(x_i) - c_spk(i)|^2
/// where c_spk is the within-batch centroid of that speaker's latent means.
/// `labels` (integer speaker index per row) is required iff lambda > 0.
/// Gradients are exact for this single-draw loss.
ElboResult ElboLossAndGrads(const VaeModel& model, const Matrix& batch,
                            std::optional<std::span<const int>> labels,
                            const Matrix& noise);

/// Additive constant (d/2) ln(2 pi) dropped from the reconstruction term.
double ReconstructionConstant(std::size_t dim);

/// Fresh, untrained model for inputs of dimension `input_dim`. The
/// standardization is the identity until training sets it.
VaeModel InitVae(std::size_t input_dim, const VaeConfig& config);

struct VaeTrainResult {
  VaeModel model;
  std::vector<double> epoch_losses;  // mean per-sample loss of each epoch
};

VaeTrainResult TrainVae(const EmbeddingSet& set, const VaeConfig& config);

struct VaeAdaptConfig {
  VaeAdaptMode mode = VaeAdaptMode::kRetrain;
  // Overrides config.epochs when set.
  std::optional<int> epochs;
};

/// kRetrain trains a fresh model on `ood_set` with the original config;
/// kFinetune continues from `model` at the fine-tune learning rate.
VaeTrainResult AdaptVae(const VaeModel& model, const EmbeddingSet& ood_set,
                        const VaeAdaptConfig& adapt);

/// Posterior means mu(x) of every record; no sampling.
EmbeddingSet Normalize(const VaeModel& model, const EmbeddingSet& set);
Vector NormalizeVector(const VaeModel& model, std::span<const double> x);

/// `epoch,loss` CSV.
void WriteLossLog(std::span<const double> epoch_losses, const std::filesystem::path& path);

}  // namespace svb

#endif  // SVB_VAE_H_
