// src/vae/adam.cc

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

#include "svb/adam.h"

#include <cmath>
#include <string>

#include "svb/errors.h"

namespace svb {

AdamState MakeAdamState(std::span<const std::span<double>> params,
                        const AdamHyperParams& hyper) {
  AdamState state;
  state.hyper = hyper;
  for (const auto& p : params) {
    state.first_moment.emplace_back(p.size(), 0.0);
    state.second_moment.emplace_back(p.size(), 0.0);
  }
  return state;
}

void AdamStep(std::span<const std::span<double>> params,
              std::span<const std::span<const double>> grads, AdamState* state) {
  if (params.size() != grads.size() || params.size() != state->first_moment.size() ||
      params.size() != state->second_moment.size())
    throw InvalidInput("AdamStep: parameter/gradient/state buffer count mismatch");
  for (std::size_t i = 0; i < params.size(); ++i)
    if (params[i].size() != grads[i].size() ||
        params[i].size() != state->first_moment[i].size() ||
        params[i].size() != state->second_moment[i].size())
      throw InvalidInput("AdamStep: shape mismatch in buffer " + std::to_string(i));

  const AdamHyperParams& h = state->hyper;
  ++state->step;
  const double t = static_cast<double>(state->step);
  const double correction1 = 1.0 - std::pow(h.beta1, t);
  const double correction2 = 1.0 - std::pow(h.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto p = params[i];
    auto g = grads[i];
    auto& m = state->first_moment[i];
    auto& v = state->second_moment[i];
    for (std::size_t j = 0; j < p.size(); ++j) {
      m[j] = h.beta1 * m[j] + (1.0 - h.beta1) * g[j];
      v[j] = h.beta2 * v[j] + (1.0 - h.beta2) * g[j] * g[j];
      const double m_hat = m[j] / correction1;
      const double v_hat = v[j] / correction2;
      p[j] -= h.learning_rate * m_hat / (std::sqrt(v_hat) + h.epsilon);
    }
  }
}

}  // namespace svb
