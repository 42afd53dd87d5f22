// include/svb/mlp.h

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

#ifndef SVB_MLP_H_
#define SVB_MLP_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "svb/matrix.h"

namespace svb {

enum class Activation : std::uint8_t { kTanh = 0, kRelu = 1, kLinear = 2 };

std::string_view ActivationName(Activation a);

struct DenseLayer {
  Matrix weights;  // out x in
  Vector bias;     // out
  Activation activation = Activation::kLinear;

  std::size_t in() const { return weights.cols(); }
  std::size_t out() const { return weights.rows(); }
  bool operator==(const DenseLayer&) const = default;
};

struct LayerGradient {
  Matrix weights;
  Vector bias;
};

/// Fully connected feed-forward network; batches are matrices with one
/// sample per row.
struct MlpNetwork {
  std::vector<DenseLayer> layers;

  std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().in(); }
  std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().out(); }
  std::size_t ParameterCount() const;
  /// Layer shapes chain and every parameter is finite; throws InvalidInput.
  void Validate() const;
  bool operator==(const MlpNetwork&) const = default;
};

/// Layer sizes {in, h1, ..., out}; hidden layers use `hidden`, the last
/// layer `output`. Weights uniform in +-sqrt(6 / (fan_in + fan_out)), zero
/// biases.
MlpNetwork MakeMlp(std::span<const std::size_t> sizes, Activation hidden,
                   Activation output, std::mt19937_64* rng);

/// activations[0] is the input; activations[l + 1] the output of layer l.
struct ForwardCache {
  std::vector<Matrix> activations;
  const Matrix& output() const { return activations.back(); }
};

ForwardCache Forward(const MlpNetwork& net, Matrix input);
Matrix ForwardOutput(const MlpNetwork& net, Matrix input);

/// Back-propagates dLoss/dOutput. Returns per-layer gradients and writes
/// dLoss/dInput to `input_grad` when non-null.
std::vector<LayerGradient> Backward(const MlpNetwork& net, const ForwardCache& cache,
                                    const Matrix& output_grad, Matrix* input_grad);

/// Parameter buffers in a fixed order: for each layer, weights then bias.
std::vector<std::span<double>> ParameterSpans(MlpNetwork* net);
std::vector<std::span<const double>> GradientSpans(
    const std::vector<LayerGradient>& grads);

}  // namespace svb

#endif  // SVB_MLP_H_
