// Copyright 2026 The rsqrt2pc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// Wall-clock cost of the building blocks. Both parties run in this process
// over the in-memory channel, so times include both sides' work.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "rsqrt2pc/flood.h"
#include "rsqrt2pc/nonlinear.h"
#include "rsqrt2pc/ring.h"
#include "rsqrt2pc/rsqrt.h"
#include "rsqrt2pc/session.h"

namespace {

using namespace rsqrt2pc;

struct Shared {
  std::vector<uint64_t> client, server;
};

Shared share_lognormal(size_t n, uint64_t seed) {
  const ring::FixedPointCodec c;
  std::mt19937_64 rng(seed);
  std::lognormal_distribution<double> d(std::log(3.0), 0.35);
  Shared s;
  for (size_t i = 0; i < n; ++i) {
    const auto [a, b] = ring::make_shares(d(rng), c, rng);
    s.client.push_back(a.value);
    s.server.push_back(b.value);
  }
  return s;
}

void BM_SeedLocal(benchmark::State& state) {
  const rsqrt::SeedParams p;
  float x = 0.37f;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rsqrt::seed_local(x, p));
    x = x < 1e4f ? x * 1.0001f : 0.37f;
  }
}
BENCHMARK(BM_SeedLocal);

void BM_SeedShare(benchmark::State& state) {
  const rsqrt::SeedParams p;
  float x = 8192.5f;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rsqrt::seed_share(ring::Party::kServer, x, p));
    x = x < 16384.0f ? x + 0.25f : 8192.5f;
  }
}
BENCHMARK(BM_SeedShare);

void BM_BeaverMul(benchmark::State& state) {
  const auto n = static_cast<size_t>(state.range(0));
  const auto x = share_lognormal(n, 1), y = share_lognormal(n, 2);
  for (auto _ : state) {
    auto r = run_two_party(SessionOptions{}, [&](Session& s) {
      return s.is_server() ? s.mul(x.server, y.server) : s.mul(x.client, y.client);
    });
    benchmark::DoNotOptimize(r.client.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_BeaverMul)->RangeMultiplier(8)->Range(8, 4096)->UseRealTime();

void BM_RsqrtShared(benchmark::State& state) {
  const auto n = static_cast<size_t>(state.range(0));
  const auto x = share_lognormal(n, 3);
  rsqrt::RsqrtConfig cfg;
  cfg.newton.iterations = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto r = run_two_party(SessionOptions{}, [&](Session& s) {
      return rsqrt::rsqrt_shared(s, s.is_server() ? x.server : x.client, cfg);
    });
    benchmark::DoNotOptimize(r.client.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_RsqrtShared)
    ->ArgsProduct({{8, 256, 4096}, {4, 6}})
    ->UseRealTime();

void BM_LayerNorm(benchmark::State& state) {
  const size_t rows = 8, width = static_cast<size_t>(state.range(0));
  const ring::FixedPointCodec c;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd(0.0, 1.0);
  Shared x;
  for (size_t i = 0; i < rows * width; ++i) {
    const auto [a, b] = ring::make_shares(nd(rng), c, rng);
    x.client.push_back(a.value);
    x.server.push_back(b.value);
  }
  nonlinear::LayerNormConfig cfg;
  cfg.rsqrt.flood.E_m = 127;
  cfg.rsqrt.newton.iterations = 6;
  const std::vector<double> gamma(width, 1.0), beta(width, 0.0);
  for (auto _ : state) {
    auto r = run_two_party(SessionOptions{}, [&](Session& s) {
      return nonlinear::layernorm_shared(
                 s, {{rows, width}, s.is_server() ? x.server : x.client},
                 gamma, beta, cfg)
          .data;
    });
    benchmark::DoNotOptimize(r.client.data());
  }
}
BENCHMARK(BM_LayerNorm)->Arg(16)->Arg(256)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
