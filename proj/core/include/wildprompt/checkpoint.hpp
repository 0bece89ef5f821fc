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

#ifndef WILDPROMPT_CHECKPOINT_HPP
#define WILDPROMPT_CHECKPOINT_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace wildprompt::ema {

struct Tensor {
  std::string name;
  std::vector<std::uint64_t> shape;
  std::vector<float> data;  // flat, row-major, size == product(shape)

  bool same_schema(const Tensor& other) const {
    return name == other.name && shape == other.shape;
  }
};

/// Named float32 tensors forming one model checkpoint. Tensor order is
/// significant: the container round-trips it bit-exactly. `step` is in-memory
/// bookkeeping only and is not persisted.
struct CheckpointTensorSet {
  std::vector<Tensor> tensors;
  std::uint64_t step = 0;

  const Tensor* find(const std::string& name) const;

  /// Same tensor names and shapes in the same order.
  bool same_schema(const CheckpointTensorSet& other) const;

  /// Throws SchemaMismatch unless invariants hold: unique non-empty names,
  /// product(shape) == data length for every tensor.
  void validate() const;
};

/// Checkpoint container, little-endian:
///   magic "WSCP" | version u32=1 | tensor_count u32
///   per tensor: name_len u16 | name | rank u32 | dims u64*rank
///               | dtype u8 (0 = float32) | payload raw f32
///   trailing CRC32 (IEEE) of all preceding bytes.
///
/// read throws BadMagic, ChecksumMismatch, UnsupportedVersion, TruncatedFile.
CheckpointTensorSet read_checkpoint(const std::filesystem::path& path);
void write_checkpoint(const CheckpointTensorSet& set, const std::filesystem::path& path);

}  // namespace wildprompt::ema

#endif  // WILDPROMPT_CHECKPOINT_HPP
