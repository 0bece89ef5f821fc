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

#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "wildprompt/checkpoint.hpp"
#include "wildprompt/ema.hpp"
#include "wildprompt/judges.hpp"
#include "wildprompt/metrics.hpp"
#include "wildprompt/selection.hpp"

namespace {

using namespace wildprompt;

std::vector<std::string> random_tokens(std::size_t n, std::mt19937& rng) {
  std::uniform_int_distribution<int> letter(0, 25);
  std::vector<std::string> tokens;
  tokens.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string t;
    for (int j = 0; j < 5; ++j) t += char('a' + letter(rng));
    tokens.push_back(t);
  }
  return tokens;
}

void BM_EditCounts(benchmark::State& state) {
  std::mt19937 rng(7);
  auto ref = random_tokens(static_cast<std::size_t>(state.range(0)), rng);
  auto hyp = ref;
  std::uniform_int_distribution<std::size_t> pick(0, hyp.size() - 1);
  for (std::size_t i = 0; i < hyp.size() / 5; ++i) hyp[pick(rng)] = "swap";
  for (auto _ : state) {
    benchmark::DoNotOptimize(metrics::edit_counts(ref, hyp));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EditCounts)->Arg(16)->Arg(64)->Arg(256);

void BM_ADcf(benchmark::State& state) {
  std::mt19937 rng(11);
  std::normal_distribution<double> score(0.0, 1.0);
  std::vector<metrics::TrialScore> trials;
  for (auto label : {metrics::TrialLabel::Target, metrics::TrialLabel::Nontarget,
                     metrics::TrialLabel::Spoof}) {
    for (int i = 0; i < state.range(0); ++i) trials.push_back({label, score(rng)});
  }
  metrics::ADCFConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(metrics::a_dcf(trials, cfg));
  }
  state.SetItemsProcessed(state.iterations() * trials.size());
}
BENCHMARK(BM_ADcf)->Arg(100)->Arg(1000)->Arg(10000);

void BM_EmaUpdate(benchmark::State& state) {
  std::mt19937 rng(13);
  std::uniform_real_distribution<float> value(-1.0f, 1.0f);
  ema::CheckpointTensorSet weights;
  std::vector<float> data(static_cast<std::size_t>(state.range(0)));
  for (auto& v : data) v = value(rng);
  weights.tensors.push_back({"w", {data.size()}, data});
  auto ema_state = ema::ema_init(weights, 0.99);
  for (auto _ : state) {
    ema::ema_update(ema_state, weights);
    benchmark::DoNotOptimize(ema_state.shadow.tensors[0].data.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EmaUpdate)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20);

void BM_ParseScore(benchmark::State& state) {
  const std::string raw =
      "The delivery is vivid and the pacing varies naturally. "
      "Per the rubric, 7-8 means expressive. Final total score: 7.5";
  for (auto _ : state) {
    benchmark::DoNotOptimize(judges::parse_score(raw));
  }
}
BENCHMARK(BM_ParseScore);

void BM_OsaDistance(benchmark::State& state) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> letter(0, 25);
  auto make = [&] {
    std::string s;
    for (int i = 0; i < state.range(0); ++i) s += char('a' + letter(rng));
    return s;
  };
  std::string a = make(), b = make();
  for (auto _ : state) {
    benchmark::DoNotOptimize(selection::osa_distance(a, b));
  }
}
BENCHMARK(BM_OsaDistance)->Arg(32)->Arg(128);

void BM_NormalizeText(benchmark::State& state) {
  const std::string text =
      "Well, it's a LONG story: forty-two \"answers\" later, nobody knew!";
  for (auto _ : state) {
    benchmark::DoNotOptimize(metrics::normalize_text(text));
  }
}
BENCHMARK(BM_NormalizeText);

}  // namespace

BENCHMARK_MAIN();
