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

namespace rsqrt2pc::bench {

// Table lookup on a sigma-bit input with M entries of alpha_bits each.
struct LutCostModel {
  int sigma = 16;
  double entries = 65536.0;
  int alpha_bits = 64;

  void validate() const;
};

struct LutCost {
  double online_bits = 0.0;
  double offline_bits = 0.0;
};

// online = calls (M alpha + sigma), offline = calls (2^sigma - log2 M).
LutCost lut_cost(const LutCostModel& model, uint64_t calls);

// Taylor series of x^(-1/2) about 1, truncated after the given order.
// Orders 0..7 are supported.
double taylor_seed(double x, int order);
// One multiplication per order term (Horner form).
int taylor_seed_muls(int order);

// 2.2 exp(-0.5 x + 0.2) + 0.2
double crypten_seed(double x);
// exp by (1 + y/2^n)^(2^n): n squarings.
int crypten_seed_muls(int exp_squarings = 8);

// Newton iteration counts used when modelling each baseline.
inline constexpr int kIterationsOurs = 4;
inline constexpr int kIterationsCrypten = 10;
inline constexpr int kIterationsTaylorHigh = 2;
inline constexpr int kIterationsTaylorLow = 8;
inline constexpr int kIterationsLut = 2;
inline constexpr int kMulsPerNewtonStep = 3;

}  // namespace rsqrt2pc::bench
