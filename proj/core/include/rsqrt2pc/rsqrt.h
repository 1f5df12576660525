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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rsqrt2pc/flood.h"
#include "rsqrt2pc/floatbits.h"
#include "rsqrt2pc/ring.h"
#include "rsqrt2pc/session.h"

namespace rsqrt2pc::rsqrt {

inline constexpr int64_t kMagicK1 = 0x5f3759df;
// Share magnitudes below this are raised to it before decomposition.
inline constexpr double kMagnitudeFloor = 0x1p-30;

// Constants of the bit-level seed. K2 and the compensation term are
// derived, never stored.
struct SeedParams {
  double b = 0.045;
  int64_t K1 = kMagicK1;
  int E_f = 140;
  int E_m = 128;
  bool flooded = true;

  // round((3B - 3b - 1) * L / 2)
  int64_t k2() const;
  // (E_f - E_m) * L / 2 when flooded, else 0.
  int64_t comp() const;

  static SeedParams from_flood(const flood::FloodConfig& cfg, bool flooded,
                               double b = 0.045);
  static SeedParams unflooded(double b = 0.045);
  void validate() const;
};

// How the bit-domain seed shares become value-domain shares.
//   kMaskedOpen: open the seed integer under a dealer mask that also shifts
//     its exponent by a secret amount, then rescale with shares of
//     2^-shift. One round, one element per party. Reveals the seed's
//     mantissa.
//   kLocalReinterpret: read each party's integer as a slope on the binade
//     the flooded seed is known to land in. No communication; only valid
//     for flooded shares.
enum class Strategy { kMaskedOpen, kLocalReinterpret };

Strategy parse_strategy(const std::string& name);
const char* strategy_name(Strategy s);

struct NewtonConfig {
  int iterations = 4;
  double divergence_bound = 1e6;
  Strategy strategy = Strategy::kMaskedOpen;
  int mask_shift = 8;
  // Opens y after every iteration and throws DomainError past
  // divergence_bound. Test and bench use only: it leaks y.
  bool detect_divergence = false;

  void validate() const;
};

struct RsqrtConfig {
  flood::FloodConfig flood;
  bool flooded = true;
  // When flooded, re-randomise the operand into flooded form first. Off
  // means the caller already supplies flooded shares.
  bool reshare_flood = true;
  double b = 0.045;
  NewtonConfig newton;

  SeedParams seed() const { return SeedParams::from_flood(flood, flooded, b); }
};

// Classic one-party seed: value(K1 - i/2).
float seed_local(float x, const SeedParams& params);

// One party's seed integer, computed from its own share only.
int64_t seed_share(ring::Party party, float share, const SeedParams& params);
// (o_c, o_s) for a pair of float shares.
std::pair<int64_t, int64_t> seed_shares(float fc, float fs,
                                        const SeedParams& params);

// y <- y * (3/2 - x/2 * y^2), n times.
double newton_plain(double x, double y0, int n);

// This party's seed integers (one per element) to value shares.
Shares bits_to_value_shares(Session& s, std::span<const int64_t> seed_bits,
                            const NewtonConfig& cfg, const SeedParams& params);

// n Newton steps on shares; 3 multiplications and 3 rounds per step.
Shares newton_shared(Session& s, std::span<const uint64_t> x,
                     std::span<const uint64_t> y, const NewtonConfig& cfg);

// Shares of 1/sqrt(x) for positive shared x.
Shares rsqrt_shared(Session& s, std::span<const uint64_t> x,
                    const RsqrtConfig& cfg);

// Float view of a share for seed extraction: |decode(v)| floored.
float share_magnitude(uint64_t v, const ring::FixedPointCodec& codec);

}  // namespace rsqrt2pc::rsqrt
