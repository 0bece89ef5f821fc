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

#ifndef WILDPROMPT_EMA_HPP
#define WILDPROMPT_EMA_HPP

#include <filesystem>
#include <vector>

#include "wildprompt/checkpoint.hpp"

namespace wildprompt::ema {

/// Running average of model parameters:
///   shadow <- beta*shadow + (1-beta)*weights, elementwise.
/// Each element is combined in double and rounded to float32 once per
/// update, left to right within a tensor, so results are bit-reproducible.
struct EmaState {
  CheckpointTensorSet shadow;
  double beta = 0.0;
  std::uint64_t updates_applied = 0;
};

/// Shadow starts as a copy of `weights` (no bias correction).
/// Throws InvalidBeta unless 0 <= beta < 1.
EmaState ema_init(const CheckpointTensorSet& weights, double beta);

/// One averaging step. `weights` must match the shadow schema exactly
/// (same names, shapes, and order). Throws SchemaMismatch.
void ema_update(EmaState& state, const CheckpointTensorSet& weights);

/// Offline replay: ema_init(first) then ema_update over the rest, in path
/// order. A single path returns that checkpoint verbatim.
CheckpointTensorSet ema_average_files(const std::vector<std::filesystem::path>& paths,
                                      double beta);

}  // namespace wildprompt::ema

#endif  // WILDPROMPT_EMA_HPP
