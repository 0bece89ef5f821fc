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

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <random>

#include <zlib.h>

#include "test_util.hpp"
#include "wildprompt/ema.hpp"
#include "wildprompt/error.hpp"

using namespace wildprompt;
using ema::CheckpointTensorSet;
using ema::EmaState;
using ema::Tensor;
using testutil::error_code_of;
using testutil::read_file;
using testutil::TempDir;
using testutil::write_file;

namespace {

std::uint32_t zlib_crc(const std::string& bytes) {
  return static_cast<std::uint32_t>(
      crc32(crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(bytes.data()),
            static_cast<uInt>(bytes.size())));
}

std::uint32_t read_le32(const std::string& bytes, std::size_t offset) {
  std::uint32_t v = 0;
  std::memcpy(&v, bytes.data() + offset, 4);
  return v;  // test targets are little-endian
}

void write_le32(std::string& bytes, std::size_t offset, std::uint32_t v) {
  std::memcpy(bytes.data() + offset, &v, 4);
}

// Rewrites the trailing CRC to match the (possibly tampered) body.
void fix_crc(std::string& bytes) {
  std::string body = bytes.substr(0, bytes.size() - 4);
  write_le32(bytes, bytes.size() - 4, zlib_crc(body));
}

CheckpointTensorSet sample_set() {
  CheckpointTensorSet set;
  set.tensors.push_back({"w2", {2, 3}, {1.5f, -2.0f, 0.0f, 3.25f, -0.125f, 7.0f}});
  set.tensors.push_back({"a1", {}, {42.0f}});  // rank-0 scalar
  set.tensors.push_back(
      {"m3", {4}, {std::numeric_limits<float>::infinity(),
                   -std::numeric_limits<float>::infinity(),
                   std::numeric_limits<float>::quiet_NaN(), 1e-40f}});
  set.step = 1234;
  return set;
}

bool bitwise_equal(const std::vector<float>& a, const std::vector<float>& b) {
  if (a.size() != b.size()) return false;
  return a.empty() ||
         std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

CheckpointTensorSet scalar_set(const std::string& name, float value) {
  CheckpointTensorSet set;
  set.tensors.push_back({name, {1}, {value}});
  return set;
}

}  // namespace

TEST_SUITE("checkpoint_ema") {

TEST_CASE("checkpoint round-trips bit-exactly, preserving tensor order") {
  TempDir dir;
  auto path = dir / "ckpt.wscp";
  auto original = sample_set();
  ema::write_checkpoint(original, path);
  auto loaded = ema::read_checkpoint(path);

  REQUIRE(loaded.tensors.size() == 3);
  // Insertion order, not name order.
  CHECK(loaded.tensors[0].name == "w2");
  CHECK(loaded.tensors[1].name == "a1");
  CHECK(loaded.tensors[2].name == "m3");
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(loaded.tensors[i].shape == original.tensors[i].shape);
    CHECK(bitwise_equal(loaded.tensors[i].data, original.tensors[i].data));
  }
  // step is in-memory bookkeeping, not part of the container.
  CHECK(loaded.step == 0);

  // Writing the loaded set again reproduces the same bytes.
  auto path2 = dir / "ckpt2.wscp";
  ema::write_checkpoint(loaded, path2);
  CHECK(read_file(path) == read_file(path2));
}

TEST_CASE("container layout: magic, version, and trailing crc32") {
  TempDir dir;
  auto path = dir / "ckpt.wscp";
  ema::write_checkpoint(sample_set(), path);
  auto bytes = read_file(path);

  REQUIRE(bytes.size() > 16);
  CHECK(bytes.substr(0, 4) == "WSCP");
  CHECK(read_le32(bytes, 4) == 1);  // version
  CHECK(read_le32(bytes, 8) == 3);  // tensor count
  CHECK(read_le32(bytes, bytes.size() - 4) ==
        zlib_crc(bytes.substr(0, bytes.size() - 4)));
}

TEST_CASE("empty tensor set round-trips") {
  TempDir dir;
  auto path = dir / "empty.wscp";
  ema::write_checkpoint(CheckpointTensorSet{}, path);
  CHECK(read_file(path).size() == 16);
  auto loaded = ema::read_checkpoint(path);
  CHECK(loaded.tensors.empty());
}

TEST_CASE("corrupted or foreign files are rejected") {
  TempDir dir;
  auto path = dir / "ckpt.wscp";
  ema::write_checkpoint(sample_set(), path);
  auto good = read_file(path);

  SUBCASE("flipped payload byte fails the checksum") {
    auto bad = good;
    bad[bad.size() / 2] = static_cast<char>(~bad[bad.size() / 2]);
    write_file(path, bad);
    CHECK(error_code_of([&] { ema::read_checkpoint(path); }) ==
          ErrorCode::ChecksumMismatch);
  }

  SUBCASE("wrong magic wins over every other problem") {
    auto bad = good;
    bad[0] = 'X';
    write_file(path, bad);
    CHECK(error_code_of([&] { ema::read_checkpoint(path); }) == ErrorCode::BadMagic);
  }

  SUBCASE("too short to hold a header") {
    write_file(path, std::string("WSCP\x01\x00\x00\x00", 8));
    CHECK(error_code_of([&] { ema::read_checkpoint(path); }) ==
          ErrorCode::TruncatedFile);
    write_file(path, "WS");
    CHECK(error_code_of([&] { ema::read_checkpoint(path); }) ==
          ErrorCode::TruncatedFile);
  }

  SUBCASE("unknown version, checksum intact") {
    auto bad = good;
    write_le32(bad, 4, 2);
    fix_crc(bad);
    write_file(path, bad);
    CHECK(error_code_of([&] { ema::read_checkpoint(path); }) ==
          ErrorCode::UnsupportedVersion);
  }

  SUBCASE("unknown dtype, checksum intact") {
    // First tensor "w2": header is 12 bytes, then u16 len + 2-byte name,
    // u32 rank, 2 u64 dims; the dtype byte follows.
    std::size_t dtype_at = 12 + 2 + 2 + 4 + 16;
    auto bad = good;
    bad[dtype_at] = 7;
    fix_crc(bad);
    write_file(path, bad);
    CHECK(error_code_of([&] { ema::read_checkpoint(path); }) ==
          ErrorCode::UnsupportedVersion);
  }

  SUBCASE("body cut short, checksum recomputed to match") {
    auto bad = good.substr(0, good.size() - 12);
    bad.resize(bad.size() + 4);
    fix_crc(bad);
    write_file(path, bad);
    CHECK(error_code_of([&] { ema::read_checkpoint(path); }) ==
          ErrorCode::TruncatedFile);
  }

  SUBCASE("trailing garbage after the last tensor, checksum intact") {
    auto bad = good.substr(0, good.size() - 4) + std::string("zzzz") + "----";
    fix_crc(bad);
    write_file(path, bad);
    CHECK(error_code_of([&] { ema::read_checkpoint(path); }) ==
          ErrorCode::TruncatedFile);
  }

  SUBCASE("missing file") {
    CHECK(error_code_of([&] { ema::read_checkpoint(dir / "nope.wscp"); }) ==
          ErrorCode::IoError);
  }
}

TEST_CASE("validate rejects malformed tensor sets") {
  CheckpointTensorSet set;
  set.tensors.push_back({"", {1}, {1.0f}});
  CHECK(error_code_of([&] { set.validate(); }) == ErrorCode::SchemaMismatch);

  set.tensors.clear();
  set.tensors.push_back({"a", {1}, {1.0f}});
  set.tensors.push_back({"a", {1}, {2.0f}});
  CHECK(error_code_of([&] { set.validate(); }) == ErrorCode::SchemaMismatch);

  set.tensors.clear();
  set.tensors.push_back({"a", {2, 2}, {1.0f, 2.0f}});  // product 4 != 2
  CHECK(error_code_of([&] { set.validate(); }) == ErrorCode::SchemaMismatch);

  set.tensors.clear();
  set.tensors.push_back({"a", {0}, {}});  // zero dim
  CHECK(error_code_of([&] { set.validate(); }) == ErrorCode::SchemaMismatch);

  // write_checkpoint validates before writing anything.
  TempDir dir;
  CHECK(error_code_of([&] { ema::write_checkpoint(set, dir / "x.wscp"); }) ==
        ErrorCode::SchemaMismatch);
}

TEST_CASE("ema_init copies weights and gates beta") {
  auto weights = sample_set();
  for (double beta : {1.0, 1.5, -0.1, std::numeric_limits<double>::quiet_NaN()}) {
    CHECK(error_code_of([&] { ema::ema_init(weights, beta); }) ==
          ErrorCode::InvalidBeta);
  }

  auto state = ema::ema_init(weights, 0.99);
  CHECK(state.beta == 0.99);
  CHECK(state.updates_applied == 0);
  REQUIRE(state.shadow.tensors.size() == weights.tensors.size());
  for (std::size_t i = 0; i < weights.tensors.size(); ++i) {
    CHECK(bitwise_equal(state.shadow.tensors[i].data, weights.tensors[i].data));
  }
}

TEST_CASE("beta zero tracks the latest weights exactly") {
  auto state = ema::ema_init(scalar_set("w", 5.0f), 0.0);
  auto next = scalar_set("w", -3.25f);
  next.step = 7;
  ema::ema_update(state, next);
  CHECK(state.shadow.tensors[0].data[0] == -3.25f);
  CHECK(state.shadow.step == 7);
  CHECK(state.updates_applied == 1);
  ema::ema_update(state, scalar_set("w", 0.5f));
  CHECK(state.shadow.tensors[0].data[0] == 0.5f);
  CHECK(state.updates_applied == 2);
}

TEST_CASE("ema matches the closed form on positive sequences") {
  std::mt19937_64 rng(20260814);
  std::uniform_real_distribution<double> value(0.5, 2.0);
  for (double beta : {0.0, 0.5, 0.9, 0.99}) {
    for (int trial = 0; trial < 25; ++trial) {
      std::uniform_int_distribution<int> len(1, 20);
      int n = len(rng);
      std::vector<double> thetas(static_cast<std::size_t>(n) + 1);
      for (auto& t : thetas) t = value(rng);

      auto state = ema::ema_init(scalar_set("w", static_cast<float>(thetas[0])), beta);
      for (int i = 1; i <= n; ++i) {
        ema::ema_update(state, scalar_set("w", static_cast<float>(thetas[i])));
      }

      // shadow_n = beta^n * theta_0 + (1-beta) * sum beta^(n-i) * theta_i
      double expect = std::pow(beta, n) * static_cast<double>(static_cast<float>(thetas[0]));
      for (int i = 1; i <= n; ++i) {
        expect += (1.0 - beta) * std::pow(beta, n - i) *
                  static_cast<double>(static_cast<float>(thetas[i]));
      }
      double got = static_cast<double>(state.shadow.tensors[0].data[0]);
      CHECK(std::abs(got - expect) <= 1e-6 * std::abs(expect));
      CHECK(state.updates_applied == static_cast<std::uint64_t>(n));
    }
  }
}

TEST_CASE("each update stays between old shadow and new weights") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<float> value(-100.0f, 100.0f);
  auto state = ema::ema_init(scalar_set("w", value(rng)), 0.9);
  for (int i = 0; i < 500; ++i) {
    float prev = state.shadow.tensors[0].data[0];
    float w = value(rng);
    ema::ema_update(state, scalar_set("w", w));
    float cur = state.shadow.tensors[0].data[0];
    CHECK(cur >= std::min(prev, w));
    CHECK(cur <= std::max(prev, w));
  }
}

TEST_CASE("ema_update rejects schema drift") {
  auto state = ema::ema_init(scalar_set("w", 1.0f), 0.9);

  CHECK(error_code_of([&] { ema::ema_update(state, scalar_set("v", 1.0f)); }) ==
        ErrorCode::SchemaMismatch);

  CheckpointTensorSet wide;
  wide.tensors.push_back({"w", {2}, {1.0f, 2.0f}});
  CHECK(error_code_of([&] { ema::ema_update(state, wide); }) ==
        ErrorCode::SchemaMismatch);

  auto two = scalar_set("w", 1.0f);
  two.tensors.push_back({"x", {1}, {0.0f}});
  CHECK(error_code_of([&] { ema::ema_update(state, two); }) ==
        ErrorCode::SchemaMismatch);
}

TEST_CASE("ema_average_files replays updates in path order") {
  TempDir dir;
  std::vector<std::filesystem::path> paths;
  std::vector<float> values = {1.0f, 2.0f, 4.0f};
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto p = dir / ("ck" + std::to_string(i) + ".wscp");
    ema::write_checkpoint(scalar_set("w", values[i]), p);
    paths.push_back(p);
  }

  auto averaged = ema::ema_average_files(paths, 0.5);
  auto state = ema::ema_init(scalar_set("w", values[0]), 0.5);
  ema::ema_update(state, scalar_set("w", values[1]));
  ema::ema_update(state, scalar_set("w", values[2]));
  CHECK(bitwise_equal(averaged.tensors[0].data, state.shadow.tensors[0].data));
  // 0.5*(0.5*1 + 0.5*2) + 0.5*4 = 2.75, exact in binary floating point.
  CHECK(averaged.tensors[0].data[0] == 2.75f);
}

TEST_CASE("ema_average_files with one input returns it verbatim") {
  TempDir dir;
  auto path = dir / "only.wscp";
  auto original = sample_set();
  ema::write_checkpoint(original, path);
  auto averaged = ema::ema_average_files({path}, 0.99);
  REQUIRE(averaged.tensors.size() == original.tensors.size());
  for (std::size_t i = 0; i < original.tensors.size(); ++i) {
    CHECK(bitwise_equal(averaged.tensors[i].data, original.tensors[i].data));
  }
}

TEST_CASE("ema_average_files input errors") {
  CHECK(error_code_of([&] { ema::ema_average_files({}, 0.9); }) ==
        ErrorCode::InvalidArgument);

  TempDir dir;
  auto a = dir / "a.wscp";
  auto b = dir / "b.wscp";
  ema::write_checkpoint(scalar_set("w", 1.0f), a);
  ema::write_checkpoint(scalar_set("different", 1.0f), b);
  try {
    ema::ema_average_files({a, b}, 0.9);
    FAIL("expected SchemaMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemaMismatch);
    // The offending file is named.
    CHECK(std::string(e.what()).find("b.wscp") != std::string::npos);
  }
}

}  // TEST_SUITE
