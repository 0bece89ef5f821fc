// Copyright 2026 the wildprompt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wildprompt/ema.hpp"

#include <string>

#include "wildprompt/error.hpp"

namespace wildprompt::ema {

namespace {

void check_schema(const CheckpointTensorSet& shadow, const CheckpointTensorSet& weights) {
  if (shadow.tensors.size() != weights.tensors.size()) {
    throw Error(ErrorCode::SchemaMismatch,
                "tensor count " + std::to_string(weights.tensors.size()) +
                    " != expected " + std::to_string(shadow.tensors.size()));
  }
  for (std::size_t i = 0; i < shadow.tensors.size(); ++i) {
    const Tensor& s = shadow.tensors[i];
    const Tensor& w = weights.tensors[i];
    if (s.name != w.name) {
      throw Error(ErrorCode::SchemaMismatch,
                  "tensor " + std::to_string(i) + " is '" + w.name +
                      "', expected '" + s.name + "'");
    }
    if (s.shape != w.shape) {
      throw Error(ErrorCode::SchemaMismatch, "tensor '" + s.name + "' shape differs");
    }
  }
}

}  // namespace

EmaState ema_init(const CheckpointTensorSet& weights, double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw Error(ErrorCode::InvalidBeta,
                "beta must lie in [0,1), got " + std::to_string(beta));
  }
  weights.validate();
  EmaState state;
  state.shadow = weights;
  state.beta = beta;
  state.updates_applied = 0;
  return state;
}

void ema_update(EmaState& state, const CheckpointTensorSet& weights) {
  check_schema(state.shadow, weights);
  const double beta = state.beta;
  const double one_minus_beta = 1.0 - beta;
  for (std::size_t i = 0; i < state.shadow.tensors.size(); ++i) {
    float* s = state.shadow.tensors[i].data.data();
    const float* w = weights.tensors[i].data.data();
    const std::size_t n = state.shadow.tensors[i].data.size();
    for (std::size_t e = 0; e < n; ++e) {
      s[e] = static_cast<float>(beta * static_cast<double>(s[e]) +
                                one_minus_beta * static_cast<double>(w[e]));
    }
  }
  state.shadow.step = weights.step;
  state.updates_applied += 1;
}

CheckpointTensorSet ema_average_files(const std::vector<std::filesystem::path>& paths,
                                      double beta) {
  if (paths.empty()) {
    throw Error(ErrorCode::InvalidArgument, "need at least one checkpoint path");
  }
  EmaState state = ema_init(read_checkpoint(paths.front()), beta);
  for (std::size_t i = 1; i < paths.size(); ++i) {
    CheckpointTensorSet weights = read_checkpoint(paths[i]);
    try {
      ema_update(state, weights);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SchemaMismatch) {
        throw Error(ErrorCode::SchemaMismatch,
                    paths[i].string() + ": " + e.what());
      }
      throw;
    }
  }
  return std::move(state.shadow);
}

}  // namespace wildprompt::ema
