// Copyright 2026 The Authors.
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


#include <benchmark/benchmark.h>

#include "simexplain/analogy.h"
#include "simexplain/evaluation.h"
#include "simexplain/feature_explainer.h"
#include "simexplain/synthetic.h"

namespace simexplain {
namespace {

SyntheticDataset dataset(std::size_t dim, std::size_t pairs) {
  SyntheticConfig cfg;
  cfg.dim = dim;
  cfg.num_pairs = pairs;
  cfg.num_training = 200;
  cfg.seed = 1;
  return make_synthetic(cfg);
}

// Full Mahalanobis fit; range(0) is the feature count.
void BM_FitFull(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  SyntheticDataset ds = dataset(d, 1);
  Perturber p = make_perturber(ds.schema, ds.training);
  const InstancePair& x = ds.pairs.front();
  Neighborhood nb = build_neighborhood(x, 300, p.default_kernel(x), p, 1);
  for (auto _ : state) {
    ExplanationReport r = fit_full(nb, *ds.oracle, FitConfig{});
    benchmark::DoNotOptimize(r.predicted_distance);
  }
}
BENCHMARK(BM_FitFull)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_FitDiag(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  SyntheticDataset ds = dataset(d, 1);
  Perturber p = make_perturber(ds.schema, ds.training);
  const InstancePair& x = ds.pairs.front();
  Neighborhood nb = build_neighborhood(x, 300, p.default_kernel(x), p, 1);
  FitConfig cfg;
  cfg.max_nonzeros = 4;
  for (auto _ : state) {
    ExplanationReport r = fit_diag(nb, *ds.oracle, cfg);
    benchmark::DoNotOptimize(r.predicted_distance);
  }
}
BENCHMARK(BM_FitDiag)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

// Greedy analogy selection, k = 10; range(0) is the pool size.
void BM_GreedySelect(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SyntheticDataset ds = dataset(5, n + 1);
  IdentityEmbedding phi(Representation::identity(ds.schema));
  std::vector<InstancePair> pool_pairs(ds.pairs.begin() + 1, ds.pairs.end());
  CandidatePool pool = build_pool(pool_pairs, *ds.oracle, phi);
  AnalogyTarget target = make_target(ds.pairs.front(), *ds.oracle, phi);
  AnalogyConfig cfg = AnalogyConfig::defaults_for(InstanceKind::kNumeric);
  cfg.k = 10;
  for (auto _ : state) {
    AnalogySet s = greedy_select(pool, target, *ds.oracle, cfg);
    benchmark::DoNotOptimize(s.objective);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GreedySelect)->RangeMultiplier(4)->Range(64, 4096)->Complexity()->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace simexplain

BENCHMARK_MAIN();
