// src/vae/vae.cc

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

#include "svb/vae.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "svb/errors.h"
#include "svb/kernels.h"

namespace svb {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr std::uint64_t kFinetuneSeedSalt = 0x9e3779b97f4a7c15ULL;

void CheckFinite(const Matrix& m, const char* name) {
  if (!AllFinite(m.data()))
    throw NumericError(std::string("non-finite values in ") + name);
}

Matrix Standardize(const VaeModel& model, const Matrix& batch) {
  if (batch.cols() != model.input_dim())
    throw InvalidInput("VAE input dimension " + std::to_string(batch.cols()) +
                       " does not match model dimension " +
                       std::to_string(model.input_dim()));
  Matrix out(batch.rows(), batch.cols());
  for (std::size_t b = 0; b < batch.rows(); ++b)
    for (std::size_t d = 0; d < batch.cols(); ++d)
      out(b, d) = (batch(b, d) - model.input_mean[d]) / model.input_scale[d];
  return out;
}

void SetStandardization(const EmbeddingSet& set, VaeModel* model) {
  const std::size_t dim = set.dim;
  const double n = static_cast<double>(set.size());
  model->input_mean.assign(dim, 0.0);
  model->input_scale.assign(dim, 0.0);
  for (const auto& r : set.records) kernels::Axpy(1.0 / n, r.vector, model->input_mean);
  for (const auto& r : set.records)
    for (std::size_t d = 0; d < dim; ++d) {
      const double c = r.vector[d] - model->input_mean[d];
      model->input_scale[d] += c * c / n;
    }
  for (double& s : model->input_scale) {
    s = std::sqrt(s);
    if (!(s > 1e-12)) s = 1.0;
  }
}

std::vector<std::span<double>> ModelParameters(VaeModel* model) {
  auto spans = ParameterSpans(&model->encoder);
  for (auto s : ParameterSpans(&model->decoder)) spans.push_back(s);
  return spans;
}

std::vector<int> SpeakerIndices(const EmbeddingSet& set) {
  std::map<std::string, int> ids;
  std::vector<int> out;
  out.reserve(set.size());
  for (const auto& r : set.records) {
    auto it = ids.emplace(r.speaker_id, static_cast<int>(ids.size())).first;
    out.push_back(it->second);
  }
  return out;
}

// Runs `epochs` passes of minibatch Adam over `set` starting from `model`.
std::vector<double> RunTraining(const EmbeddingSet& set, int epochs,
                                double learning_rate, std::uint64_t seed,
                                VaeModel* model) {
  const VaeConfig& cfg = model->config;
  if (cfg.batch_size == 0) throw InvalidInput("VAE batch size must be positive");
  const bool cohesive = model->cohesive_weight > 0.0;
  std::vector<int> speakers;
  if (cohesive) speakers = SpeakerIndices(set);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  AdamHyperParams hyper{learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon};
  auto params = ModelParameters(model);
  AdamState adam = MakeAdamState(params, hyper);

  const std::size_t n = set.size();
  const std::size_t k = model->latent_dim;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> epoch_losses;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t rows = std::min(cfg.batch_size, n - start);
      Matrix batch(rows, set.dim);
      Matrix noise(rows, k);
      std::vector<int> batch_labels;
      for (std::size_t b = 0; b < rows; ++b) {
        const auto& rec = set.records[order[start + b]];
        std::copy(rec.vector.begin(), rec.vector.end(), batch.Row(b).begin());
        if (cohesive) batch_labels.push_back(speakers[order[start + b]]);
      }
      for (double& e : noise.data()) e = normal(rng);

      ElboResult result;
      try {
        result = cohesive ? ElboLossAndGrads(*model, batch,
                                             std::span<const int>(batch_labels), noise)
                          : ElboLossAndGrads(*model, batch, std::nullopt, noise);
      } catch (const NumericError& e) {
        throw TrainingError("VAE training diverged in epoch " + std::to_string(epoch) +
                            ": " + e.what());
      }
      total += result.loss * static_cast<double>(rows);
      auto grads = GradientSpans(result.grads.encoder);
      for (auto g : GradientSpans(result.grads.decoder)) grads.push_back(g);
      AdamStep(params, grads, &adam);
    }
    const double mean_loss = total / static_cast<double>(n);
    if (!std::isfinite(mean_loss))
      throw TrainingError("VAE training diverged in epoch " + std::to_string(epoch));
    epoch_losses.push_back(mean_loss);
  }
  for (const auto& p : params)
    if (!AllFinite(p)) throw TrainingError("VAE parameters became non-finite");
  return epoch_losses;
}

void CheckTrainingSet(const EmbeddingSet& set, const VaeConfig& config) {
  if (set.empty()) throw InvalidInput("VAE training set is empty");
  if (config.cohesive_weight < 0.0) throw InvalidInput("cohesive weight must be >= 0");
  if (config.cohesive_weight > 0.0 && !set.IsLabeled())
    throw InvalidInput("C-VAE training (cohesive weight > 0) needs speaker labels");
  if (config.epochs < 0) throw InvalidInput("epochs must be >= 0");
  set.Validate();
}

}  // namespace

VaeConfig FullScaleVaeConfig() {
  VaeConfig c;
  c.latent_dim = 200;
  c.hidden = {1800, 1800};
  return c;
}

std::string_view AdaptModeName(VaeAdaptMode mode) {
  switch (mode) {
    case VaeAdaptMode::kNone: return "none";
    case VaeAdaptMode::kRetrain: return "retrain";
    case VaeAdaptMode::kFinetune: return "finetune";
  }
  return "unknown";
}

void VaeModel::Validate() const {
  encoder.Validate();
  decoder.Validate();
  if (latent_dim == 0) throw InvalidInput("VAE latent dimension is zero");
  if (encoder.output_dim() != 2 * latent_dim)
    throw InvalidInput("VAE encoder must emit 2k outputs");
  if (decoder.input_dim() != latent_dim)
    throw InvalidInput("VAE decoder input must equal k");
  if (encoder.input_dim() != input_mean.size() || decoder.output_dim() != input_mean.size() ||
      input_scale.size() != input_mean.size())
    throw InvalidInput("VAE input dimensions are inconsistent");
}

double GaussianKl(double mu, double log_var) {
  return 0.5 * (mu * mu + std::exp(log_var) - log_var - 1.0);
}

double ReconstructionConstant(std::size_t dim) {
  return 0.5 * static_cast<double>(dim) * kLog2Pi;
}

ElboResult ElboLossAndGrads(const VaeModel& model, const Matrix& batch,
                            std::optional<std::span<const int>> labels,
                            const Matrix& noise) {
  const std::size_t rows = batch.rows();
  const std::size_t k = model.latent_dim;
  if (rows == 0) throw InvalidInput("ELBO batch is empty");
  if (noise.rows() != rows || noise.cols() != k)
    throw InvalidInput("noise must be batch x latent_dim");
  const double lambda = model.cohesive_weight;
  if (lambda > 0.0 && !labels)
    throw InvalidInput("cohesive weight > 0 needs speaker labels");
  if (labels && labels->size() != rows)
    throw InvalidInput("one label per batch row required");

  const double inv_b = 1.0 / static_cast<double>(rows);
  ForwardCache enc = Forward(model.encoder, Standardize(model, batch));
  const Matrix& head = enc.output();
  CheckFinite(head, "encoder output");
  const Matrix& x = enc.activations.front();

  Matrix z(rows, k);
  Matrix log_var(rows, k);
  ElboResult result;
  for (std::size_t b = 0; b < rows; ++b) {
    for (std::size_t j = 0; j < k; ++j) {
      const double mu = head(b, j);
      const double lv = std::clamp(head(b, k + j), kLogVarMin, kLogVarMax);
      log_var(b, j) = lv;
      z(b, j) = mu + std::exp(0.5 * lv) * noise(b, j);
      result.kl += GaussianKl(mu, lv);
    }
  }
  CheckFinite(z, "latent sample");
  result.kl *= inv_b;

  ForwardCache dec = Forward(model.decoder, z);
  const Matrix& recon = dec.output();
  CheckFinite(recon, "decoder output");
  Matrix recon_grad(rows, recon.cols());
  for (std::size_t b = 0; b < rows; ++b) {
    for (std::size_t d = 0; d < recon.cols(); ++d) {
      const double diff = recon(b, d) - x(b, d);
      result.reconstruction += 0.5 * diff * diff;
      recon_grad(b, d) = diff * inv_b;
    }
  }
  result.reconstruction *= inv_b;

  Matrix z_grad;
  result.grads.decoder = Backward(model.decoder, dec, recon_grad, &z_grad);

  Matrix head_grad(rows, 2 * k);
  for (std::size_t b = 0; b < rows; ++b) {
    for (std::size_t j = 0; j < k; ++j) {
      const double mu = head(b, j);
      const double lv = log_var(b, j);
      const double sigma = std::exp(0.5 * lv);
      head_grad(b, j) = z_grad(b, j) + mu * inv_b;
      const double raw = head(b, k + j);
      if (raw >= kLogVarMin && raw <= kLogVarMax)
        head_grad(b, k + j) =
            z_grad(b, j) * 0.5 * sigma * noise(b, j) + 0.5 * (std::exp(lv) - 1.0) * inv_b;
    }
  }

  if (lambda > 0.0) {
    // Centroids of each speaker's latent means within the batch. The
    // centroid's own dependence on mu cancels in the gradient.
    std::map<int, std::pair<Vector, double>> centroids;
    for (std::size_t b = 0; b < rows; ++b) {
      auto& [sum, count] = centroids[(*labels)[b]];
      if (sum.empty()) sum.assign(k, 0.0);
      for (std::size_t j = 0; j < k; ++j) sum[j] += head(b, j);
      count += 1.0;
    }
    for (auto& [label, entry] : centroids)
      for (double& v : entry.first) v /= entry.second;
    double cohesive = 0.0;
    for (std::size_t b = 0; b < rows; ++b) {
      const Vector& c = centroids[(*labels)[b]].first;
      for (std::size_t j = 0; j < k; ++j) {
        const double diff = head(b, j) - c[j];
        cohesive += diff * diff;
        head_grad(b, j) += lambda * 2.0 * diff * inv_b;
      }
    }
    result.cohesive = lambda * cohesive * inv_b;
  }

  result.grads.encoder = Backward(model.encoder, enc, head_grad, nullptr);
  result.loss = result.kl + result.reconstruction + result.cohesive;
  if (!std::isfinite(result.loss)) throw NumericError("non-finite values in loss");
  return result;
}

VaeModel InitVae(std::size_t input_dim, const VaeConfig& config) {
  if (input_dim == 0) throw InvalidInput("VAE input dimension must be positive");
  if (config.latent_dim == 0) throw InvalidInput("VAE latent dimension must be positive");
  std::mt19937_64 rng(config.seed);
  VaeModel model;
  model.latent_dim = config.latent_dim;
  model.cohesive_weight = config.cohesive_weight;
  model.train_seed = config.seed;
  model.config = config;
  model.input_mean.assign(input_dim, 0.0);
  model.input_scale.assign(input_dim, 1.0);

  std::vector<std::size_t> enc_sizes{input_dim};
  enc_sizes.insert(enc_sizes.end(), config.hidden.begin(), config.hidden.end());
  enc_sizes.push_back(2 * config.latent_dim);
  std::vector<std::size_t> dec_sizes{config.latent_dim};
  dec_sizes.insert(dec_sizes.end(), config.hidden.rbegin(), config.hidden.rend());
  dec_sizes.push_back(input_dim);
  model.encoder = MakeMlp(enc_sizes, Activation::kTanh, Activation::kLinear, &rng);
  model.decoder = MakeMlp(dec_sizes, Activation::kTanh, Activation::kLinear, &rng);
  return model;
}

VaeTrainResult TrainVae(const EmbeddingSet& set, const VaeConfig& config) {
  CheckTrainingSet(set, config);
  VaeTrainResult result{InitVae(set.dim, config), {}};
  SetStandardization(set, &result.model);
  // Weight init consumed the seed's first draws; training gets its own stream.
  result.epoch_losses = RunTraining(set, config.epochs, config.learning_rate,
                                    config.seed + 1, &result.model);
  return result;
}

VaeTrainResult AdaptVae(const VaeModel& model, const EmbeddingSet& ood_set,
                        const VaeAdaptConfig& adapt) {
  if (ood_set.empty()) throw InvalidInput("adaptation set is empty");
  if (ood_set.dim != model.input_dim())
    throw InvalidInput("adaptation set dimension does not match the model");
  VaeConfig config = model.config;
  if (adapt.epochs) config.epochs = *adapt.epochs;
  switch (adapt.mode) {
    case VaeAdaptMode::kRetrain: {
      VaeTrainResult result = TrainVae(ood_set, config);
      result.model.adapt_mode = VaeAdaptMode::kRetrain;
      return result;
    }
    case VaeAdaptMode::kFinetune: {
      CheckTrainingSet(ood_set, config);
      VaeTrainResult result{model, {}};
      result.model.adapt_mode = VaeAdaptMode::kFinetune;
      result.epoch_losses =
          RunTraining(ood_set, config.epochs, config.finetune_learning_rate,
                      config.seed ^ kFinetuneSeedSalt, &result.model);
      return result;
    }
    case VaeAdaptMode::kNone:
      break;
  }
  throw InvalidInput("adaptation mode must be retrain or finetune");
}

Vector NormalizeVector(const VaeModel& model, std::span<const double> x) {
  Matrix row = Matrix::FromData(1, x.size(), Vector(x.begin(), x.end()));
  Matrix head = ForwardOutput(model.encoder, Standardize(model, row));
  return Vector(head.Row(0).begin(), head.Row(0).begin() + model.latent_dim);
}

EmbeddingSet Normalize(const VaeModel& model, const EmbeddingSet& set) {
  if (set.dim != model.input_dim())
    throw InvalidInput("normalize: set dimension " + std::to_string(set.dim) +
                       " does not match model dimension " +
                       std::to_string(model.input_dim()));
  EmbeddingSet out;
  out.dim = model.latent_dim;
  out.records.reserve(set.size());
  if (set.empty()) return out;
  Matrix batch(set.size(), set.dim);
  for (std::size_t i = 0; i < set.size(); ++i)
    std::copy(set.records[i].vector.begin(), set.records[i].vector.end(),
              batch.Row(i).begin());
  Matrix head = ForwardOutput(model.encoder, Standardize(model, batch));
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto row = head.Row(i);
    out.records.push_back({set.records[i].utterance_id, set.records[i].speaker_id,
                           Vector(row.begin(), row.begin() + model.latent_dim)});
  }
  return out;
}

void WriteLossLog(std::span<const double> epoch_losses,
                  const std::filesystem::path& path) {
  std::string out = "epoch,loss\n";
  for (std::size_t i = 0; i < epoch_losses.size(); ++i)
    out += std::to_string(i) + "," + FormatDouble(epoch_losses[i]) + "\n";
  WriteFileBytes(path, out);
}

}  // namespace svb
