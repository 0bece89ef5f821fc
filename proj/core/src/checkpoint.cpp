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

#include "wildprompt/checkpoint.hpp"

#include <cstring>
#include <unordered_set>

#include <zlib.h>

#include "binary_io.hpp"
#include "wildprompt/error.hpp"

namespace wildprompt::ema {

namespace {

constexpr char kMagic[4] = {'W', 'S', 'C', 'P'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint8_t kDtypeFloat32 = 0;

std::uint32_t crc32_of(std::string_view data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // crc32 takes uInt lengths; feed in chunks to stay correct on huge buffers.
  const unsigned char* p = reinterpret_cast<const unsigned char*>(data.data());
  std::size_t remaining = data.size();
  while (remaining > 0) {
    uInt chunk = static_cast<uInt>(std::min<std::size_t>(remaining, 1u << 30));
    crc = crc32(crc, p, chunk);
    p += chunk;
    remaining -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

const Tensor* CheckpointTensorSet::find(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

bool CheckpointTensorSet::same_schema(const CheckpointTensorSet& other) const {
  if (tensors.size() != other.tensors.size()) return false;
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    if (!tensors[i].same_schema(other.tensors[i])) return false;
  }
  return true;
}

void CheckpointTensorSet::validate() const {
  std::unordered_set<std::string> names;
  for (const auto& t : tensors) {
    if (t.name.empty()) {
      throw Error(ErrorCode::SchemaMismatch, "tensor with empty name");
    }
    if (!names.insert(t.name).second) {
      throw Error(ErrorCode::SchemaMismatch, "duplicate tensor name '" + t.name + "'");
    }
    std::uint64_t count = 1;
    for (std::uint64_t d : t.shape) {
      if (d == 0 || count > UINT64_MAX / d) {
        throw Error(ErrorCode::SchemaMismatch,
                    "tensor '" + t.name + "' has invalid shape");
      }
      count *= d;
    }
    if (count != t.data.size()) {
      throw Error(ErrorCode::SchemaMismatch,
                  "tensor '" + t.name + "': shape product " + std::to_string(count) +
                      " != data length " + std::to_string(t.data.size()));
    }
  }
}

CheckpointTensorSet read_checkpoint(const std::filesystem::path& path) {
  std::string data = detail::read_file_bytes(path);
  if (data.size() >= 4 && std::memcmp(data.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::BadMagic, path.string());
  }
  // magic + version + count + crc
  if (data.size() < 16) {
    throw Error(ErrorCode::TruncatedFile, path.string());
  }

  std::string_view body(data.data(), data.size() - 4);
  detail::ByteReader trailer(std::string_view(data).substr(data.size() - 4),
                             path.string());
  std::uint32_t stored_crc = trailer.u32();
  if (crc32_of(body) != stored_crc) {
    throw Error(ErrorCode::ChecksumMismatch, path.string());
  }

  detail::ByteReader reader(body, path.string());
  reader.skip(4);  // magic
  std::uint32_t version = reader.u32();
  if (version != kVersion) {
    throw Error(ErrorCode::UnsupportedVersion,
                path.string() + ": version " + std::to_string(version));
  }
  std::uint32_t tensor_count = reader.u32();

  CheckpointTensorSet set;
  set.tensors.reserve(tensor_count);
  for (std::uint32_t i = 0; i < tensor_count; ++i) {
    Tensor tensor;
    std::uint16_t name_len = reader.u16();
    tensor.name = reader.bytes(name_len);
    std::uint32_t rank = reader.u32();
    if (static_cast<std::size_t>(rank) * 8 > reader.remaining()) {
      throw Error(ErrorCode::TruncatedFile, path.string());
    }
    tensor.shape.resize(rank);
    std::uint64_t count = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      tensor.shape[d] = reader.u64();
      if (tensor.shape[d] == 0 || count > UINT64_MAX / tensor.shape[d]) {
        throw Error(ErrorCode::SchemaMismatch,
                    path.string() + ": tensor '" + tensor.name + "' has invalid shape");
      }
      count *= tensor.shape[d];
    }
    std::uint8_t dtype = reader.u8();
    if (dtype != kDtypeFloat32) {
      throw Error(ErrorCode::UnsupportedVersion,
                  path.string() + ": dtype " + std::to_string(dtype));
    }
    if (count > reader.remaining() / 4) {
      throw Error(ErrorCode::TruncatedFile, path.string());
    }
    tensor.data.resize(count);
    for (std::uint64_t e = 0; e < count; ++e) tensor.data[e] = reader.f32();
    set.tensors.push_back(std::move(tensor));
  }
  if (!reader.at_end()) {
    throw Error(ErrorCode::TruncatedFile,
                path.string() + ": trailing bytes after last tensor");
  }
  set.validate();
  return set;
}

void write_checkpoint(const CheckpointTensorSet& set, const std::filesystem::path& path) {
  set.validate();
  if (set.tensors.size() > UINT32_MAX) {
    throw Error(ErrorCode::InvalidArgument, "too many tensors");
  }

  std::string buf;
  buf.append(kMagic, 4);
  detail::put_u32(buf, kVersion);
  detail::put_u32(buf, static_cast<std::uint32_t>(set.tensors.size()));
  for (const auto& tensor : set.tensors) {
    if (tensor.name.size() > 0xffff) {
      throw Error(ErrorCode::InvalidArgument, "tensor name too long: " + tensor.name);
    }
    detail::put_u16(buf, static_cast<std::uint16_t>(tensor.name.size()));
    buf.append(tensor.name);
    detail::put_u32(buf, static_cast<std::uint32_t>(tensor.shape.size()));
    for (std::uint64_t d : tensor.shape) detail::put_u64(buf, d);
    buf.push_back(static_cast<char>(kDtypeFloat32));
    for (float v : tensor.data) detail::put_f32(buf, v);
  }
  detail::put_u32(buf, crc32_of(buf));
  detail::write_file_bytes(path, buf);
}

}  // namespace wildprompt::ema
