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
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsqrt2pc/flood.h"
#include "rsqrt2pc/ring.h"
#include "rsqrt2pc/rsqrt.h"

namespace rsqrt2pc::sweeps {

// Operands are drawn from the sampler, split with a fixed exponent gap and
// run through the unflooded pipeline. An element converges when its
// relative error is at most tolerance.
struct ClosenessConfig {
  int gap_lo = 0;
  int gap_hi = 12;
  int trials = 200;
  int iterations = 4;
  double tolerance = 1e-2;
  uint64_t seed = 1;
  double b = 0.045;
  ring::FixedPointCodec codec;
  flood::SamplerParams operands = flood::SamplerParams::rsqrt_operands(128);
};

struct ClosenessRow {
  int gap = 0;
  int trials = 0;
  int converged = 0;
  double mean_rel_err = 0.0;

  double rate() const { return trials ? double(converged) / trials : 0.0; }
};

std::vector<ClosenessRow> closeness_sweep(const ClosenessConfig& cfg);
// gap,trials,converged,mean_rel_err
std::string closeness_csv(const std::vector<ClosenessRow>& rows);

// Same adversarial splits, once as given and once flooded first.
struct AblationConfig {
  ClosenessConfig closeness;
  flood::FloodConfig flood;
};

struct AblationRow {
  int gap = 0;
  int trials = 0;
  int converged_flooded = 0;
  int converged_plain = 0;
};

std::vector<AblationRow> flood_ablation(const AblationConfig& cfg);
// gap,trials,converged_flooded,converged_plain,rate_flooded,rate_plain
std::string ablation_csv(const std::vector<AblationRow>& rows);

struct RsqrtSweepConfig {
  double lo = 0x1p-6;
  double hi = 0x1p6;
  int points = 49;
  uint64_t seed = 1;
  ring::FixedPointCodec codec;
  rsqrt::RsqrtConfig rsqrt;
  // Flooded runs only: one run per binade of the grid, each with its
  // expected exponent calibrated on that binade's points.
  bool per_binade_exponent = false;
};

struct RsqrtSweepRow {
  double x = 0.0;
  double seed_local = 0.0;
  double shared = 0.0;
  double rel_err = 0.0;
};

// Log grid over [lo, hi]; every point secret-shared with a uniform mask.
std::vector<RsqrtSweepRow> rsqrt_sweep(const RsqrtSweepConfig& cfg);
// x,seed_local,shared,rel_err
std::string rsqrt_sweep_csv(const std::vector<RsqrtSweepRow>& rows);

// Runs rsqrt_shared on explicit share pairs and returns reconstructions.
std::vector<double> run_rsqrt_on_shares(const std::vector<uint64_t>& client,
                                        const std::vector<uint64_t>& server,
                                        const ring::FixedPointCodec& codec,
                                        const rsqrt::RsqrtConfig& cfg,
                                        uint64_t seed);

}  // namespace rsqrt2pc::sweeps
