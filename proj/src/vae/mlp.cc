// src/vae/mlp.cc

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

#include "svb/mlp.h"

#include <cmath>
#include <string>

#include "svb/errors.h"
#include "svb/kernels.h"

namespace svb {

std::string_view ActivationName(Activation a) {
  switch (a) {
    case Activation::kTanh: return "tanh";
    case Activation::kRelu: return "relu";
    case Activation::kLinear: return "linear";
  }
  return "unknown";
}

std::size_t MlpNetwork::ParameterCount() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weights.data().size() + l.bias.size();
  return n;
}

void MlpNetwork::Validate() const {
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    if (l.bias.size() != l.out())
      throw InvalidInput("layer " + std::to_string(i) + ": bias size mismatch");
    if (i > 0 && layers[i - 1].out() != l.in())
      throw InvalidInput("layer " + std::to_string(i) + ": input size " +
                         std::to_string(l.in()) + " does not chain with previous output " +
                         std::to_string(layers[i - 1].out()));
    if (!AllFinite(l.weights.data()) || !AllFinite(l.bias))
      throw InvalidInput("layer " + std::to_string(i) + ": non-finite parameter");
  }
}

MlpNetwork MakeMlp(std::span<const std::size_t> sizes, Activation hidden,
                   Activation output, std::mt19937_64* rng) {
  if (sizes.size() < 2) throw InvalidInput("MakeMlp: need at least input and output size");
  MlpNetwork net;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    const std::size_t in = sizes[i], out = sizes[i + 1];
    if (in == 0 || out == 0) throw InvalidInput("MakeMlp: zero layer width");
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    DenseLayer layer{Matrix(out, in), Vector(out, 0.0),
                     i + 2 == sizes.size() ? output : hidden};
    for (double& w : layer.weights.data()) w = dist(*rng);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

ForwardCache Forward(const MlpNetwork& net, Matrix input) {
  if (input.cols() != net.input_dim())
    throw InvalidInput("Forward: input width " + std::to_string(input.cols()) +
                       " does not match network input " + std::to_string(net.input_dim()));
  ForwardCache cache;
  cache.activations.reserve(net.layers.size() + 1);
  cache.activations.push_back(std::move(input));
  const kernels::KernelTable& k = kernels::ActiveKernels();
  for (const auto& layer : net.layers) {
    const Matrix& x = cache.activations.back();
    Matrix y(x.rows(), layer.out());
    for (std::size_t b = 0; b < x.rows(); ++b) {
      auto row = x.Row(b);
      auto out = y.Row(b);
      for (std::size_t o = 0; o < layer.out(); ++o) {
        double v = k.dot(layer.weights.Row(o).data(), row.data(), row.size()) + layer.bias[o];
        switch (layer.activation) {
          case Activation::kTanh: v = std::tanh(v); break;
          case Activation::kRelu: v = v > 0.0 ? v : 0.0; break;
          case Activation::kLinear: break;
        }
        out[o] = v;
      }
    }
    cache.activations.push_back(std::move(y));
  }
  return cache;
}

Matrix ForwardOutput(const MlpNetwork& net, Matrix input) {
  ForwardCache cache = Forward(net, std::move(input));
  return std::move(cache.activations.back());
}

std::vector<LayerGradient> Backward(const MlpNetwork& net, const ForwardCache& cache,
                                    const Matrix& output_grad, Matrix* input_grad) {
  if (cache.activations.size() != net.layers.size() + 1)
    throw InvalidInput("Backward: cache does not belong to this network");
  const Matrix& out = cache.output();
  if (output_grad.rows() != out.rows() || output_grad.cols() != out.cols())
    throw InvalidInput("Backward: output gradient shape mismatch");

  std::vector<LayerGradient> grads(net.layers.size());
  const kernels::KernelTable& k = kernels::ActiveKernels();
  Matrix upstream = output_grad;
  for (std::size_t li = net.layers.size(); li-- > 0;) {
    const DenseLayer& layer = net.layers[li];
    const Matrix& x = cache.activations[li];
    const Matrix& y = cache.activations[li + 1];
    // Pre-activation gradient, computed in place.
    for (std::size_t b = 0; b < y.rows(); ++b) {
      for (std::size_t o = 0; o < y.cols(); ++o) {
        switch (layer.activation) {
          case Activation::kTanh: upstream(b, o) *= 1.0 - y(b, o) * y(b, o); break;
          case Activation::kRelu: if (!(y(b, o) > 0.0)) upstream(b, o) = 0.0; break;
          case Activation::kLinear: break;
        }
      }
    }
    LayerGradient& g = grads[li];
    g.weights = Matrix(layer.out(), layer.in());
    g.bias.assign(layer.out(), 0.0);
    const bool need_input_grad = li > 0 || input_grad != nullptr;
    Matrix downstream = need_input_grad ? Matrix(x.rows(), layer.in()) : Matrix();
    for (std::size_t b = 0; b < x.rows(); ++b) {
      auto xrow = x.Row(b);
      for (std::size_t o = 0; o < layer.out(); ++o) {
        const double d = upstream(b, o);
        if (d == 0.0) continue;
        g.bias[o] += d;
        k.axpy(d, xrow.data(), g.weights.Row(o).data(), xrow.size());
        if (need_input_grad)
          k.axpy(d, layer.weights.Row(o).data(), downstream.Row(b).data(), layer.in());
      }
    }
    upstream = std::move(downstream);
  }
  if (input_grad != nullptr) *input_grad = std::move(upstream);
  return grads;
}

std::vector<std::span<double>> ParameterSpans(MlpNetwork* net) {
  std::vector<std::span<double>> spans;
  for (auto& l : net->layers) {
    spans.push_back(l.weights.data());
    spans.push_back(l.bias);
  }
  return spans;
}

std::vector<std::span<const double>> GradientSpans(
    const std::vector<LayerGradient>& grads) {
  std::vector<std::span<const double>> spans;
  for (const auto& g : grads) {
    spans.push_back(g.weights.data());
    spans.push_back(g.bias);
  }
  return spans;
}

}  // namespace svb
