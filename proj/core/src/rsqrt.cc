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
#include "rsqrt2pc/rsqrt.h"

#include <cmath>

#include "rsqrt2pc/errors.h"

namespace rsqrt2pc::rsqrt {

using floatbits::kB;
using floatbits::kL;

int64_t SeedParams::k2() const {
  return std::llround((3.0 * kB - 3.0 * b - 1.0) * static_cast<double>(kL) /
                      2.0);
}

int64_t SeedParams::comp() const {
  return flooded ? static_cast<int64_t>(E_f - E_m) * kL / 2 : 0;
}

SeedParams SeedParams::from_flood(const flood::FloodConfig& cfg, bool flooded,
                                  double b) {
  cfg.validate();
  SeedParams p;
  p.b = b;
  p.E_f = cfg.E_f();
  p.E_m = cfg.E_m;
  p.flooded = flooded;
  return p;
}

SeedParams SeedParams::unflooded(double b) {
  SeedParams p;
  p.b = b;
  p.flooded = false;
  return p;
}

void SeedParams::validate() const {
  if (!(b > -1.0 && b < 1.0)) throw ConfigError("b must lie in (-1, 1)");
  if (E_f < 1 || E_f > 254 || E_m < 1 || E_m > 254) {
    throw ConfigError("exponents must be in [1, 254]");
  }
}

Strategy parse_strategy(const std::string& name) {
  if (name == "masked-open" || name == "A") return Strategy::kMaskedOpen;
  if (name == "local-reinterpret" || name == "B") {
    return Strategy::kLocalReinterpret;
  }
  throw ConfigError("unknown strategy '" + name + "'");
}

const char* strategy_name(Strategy s) {
  return s == Strategy::kMaskedOpen ? "masked-open" : "local-reinterpret";
}

void NewtonConfig::validate() const {
  if (iterations < 0 || iterations > 16) {
    throw ConfigError("iterations must be in [0, 16]");
  }
  if (!(divergence_bound > 0.0)) {
    throw ConfigError("divergence_bound must be positive");
  }
  if (mask_shift < 0) throw ConfigError("mask_shift must be non-negative");
}

float seed_local(float x, const SeedParams& params) {
  if (!(x > 0.0f)) throw DomainError("seed_local needs x > 0");
  const int64_t i = floatbits::bits_of(x);
  return floatbits::value_of_bits(params.K1 - i / 2);
}

float share_magnitude(uint64_t v, const ring::FixedPointCodec& codec) {
  const double d = std::fabs(codec.decode(v));
  return static_cast<float>(std::max(d, kMagnitudeFloor));
}

int64_t seed_share(ring::Party party, float share, const SeedParams& params) {
  const int64_t i = floatbits::bits_of(share);
  int64_t o = -(i / 4);
  if (party == ring::Party::kServer) o += params.k2() + params.comp();
  return o;
}

std::pair<int64_t, int64_t> seed_shares(float fc, float fs,
                                        const SeedParams& params) {
  return {seed_share(ring::Party::kClient, fc, params),
          seed_share(ring::Party::kServer, fs, params)};
}

double newton_plain(double x, double y0, int n) {
  if (!(x > 0.0)) throw DomainError("newton_plain needs x > 0");
  double y = y0;
  for (int k = 0; k < n; ++k) y = y * (1.5 - 0.5 * x * y * y);
  return y;
}

namespace {

Shares masked_open(Session& s, std::span<const int64_t> bits,
                   const NewtonConfig& cfg) {
  const auto& codec = s.codec();
  const size_t n = bits.size();
  const SeedMaskBatch masks = s.dealer().seed_masks(n, cfg.mask_shift);
  Shares mine(n);
  for (size_t i = 0; i < n; ++i) {
    mine[i] = codec.wrap(codec.from_signed(bits[i]) + masks.shift_bits[i]);
  }
  const Shares opened = s.open(mine);
  Shares out(n);
  for (size_t i = 0; i < n; ++i) {
    const int64_t shifted = codec.to_signed(opened[i]);
    const double w = floatbits::value_of_bits(shifted);
    out[i] = ring::truncate_local(s.party(),
                                  codec.wrap(codec.encode(w) *
                                             masks.inv_scale[i]),
                                  codec.frac_bits(), codec);
  }
  return out;
}

Shares local_reinterpret(Session& s, std::span<const int64_t> bits,
                         const SeedParams& params) {
  if (!params.flooded) {
    throw UsageError(
        "local-reinterpret conversion is only sound on flooded shares");
  }
  const auto& codec = s.codec();
  const int64_t centre = params.k2() + params.comp() -
                         static_cast<int64_t>(params.E_f) * kL / 2;
  const double e_star = std::floor(static_cast<double>(centre) /
                                   static_cast<double>(kL));
  const double scale = std::ldexp(1.0, static_cast<int>(e_star) - kB);
  Shares out(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) {
    double v = static_cast<double>(bits[i]) / static_cast<double>(kL);
    if (s.is_server()) v += 1.0 - e_star;
    out[i] = codec.encode(scale * v);
  }
  return out;
}

}  // namespace

Shares bits_to_value_shares(Session& s, std::span<const int64_t> seed_bits,
                            const NewtonConfig& cfg, const SeedParams& params) {
  cfg.validate();
  if (cfg.strategy == Strategy::kMaskedOpen) {
    return masked_open(s, seed_bits, cfg);
  }
  return local_reinterpret(s, seed_bits, params);
}

Shares newton_shared(Session& s, std::span<const uint64_t> x,
                     std::span<const uint64_t> y, const NewtonConfig& cfg) {
  cfg.validate();
  if (x.size() != y.size()) throw UsageError("newton_shared: size mismatch");
  const auto& codec = s.codec();
  const uint64_t three_halves = codec.encode(1.5);
  Shares cur(y.begin(), y.end());
  for (int k = 0; k < cfg.iterations; ++k) {
    const Shares y2 = s.mul(cur, cur);
    // x/2 is folded into the rescale of x*y^2. Halving x itself would need
    // its shares to wrap, which flooded-free splits need not do.
    Shares u = s.mul_rescaled(x, y2, codec.frac_bits() + 1);
    for (auto& v : u) v = codec.wrap(uint64_t{0} - v);
    ring::add_public_inplace(s.party(), u, three_halves, codec);
    cur = s.mul(cur, u);
    if (cfg.detect_divergence) {
      for (double v : s.open_values(cur)) {
        if (!(std::fabs(v) <= cfg.divergence_bound)) {
          throw DomainError("Newton iterate left the divergence bound");
        }
      }
    }
  }
  return cur;
}

Shares rsqrt_shared(Session& s, std::span<const uint64_t> x,
                    const RsqrtConfig& cfg) {
  const SeedParams params = cfg.seed();
  params.validate();
  const transport::CommStats before = s.stats();
  const uint64_t muls_before = s.mul_elements();
  Shares operand(x.begin(), x.end());
  if (cfg.flooded && cfg.reshare_flood) {
    operand = flood::flood_reshare(s, operand, cfg.flood);
  }
  const auto& codec = s.codec();
  const transport::CommStats seed_before = s.stats();
  std::vector<int64_t> bits(operand.size());
  for (size_t i = 0; i < operand.size(); ++i) {
    bits[i] = seed_share(s.party(), share_magnitude(operand[i], codec), params);
  }
  const transport::CommStats seed_delta = s.stats() - seed_before;
  const Shares y0 = bits_to_value_shares(s, bits, cfg.newton, params);
  Shares y = newton_shared(s, operand, y0, cfg.newton);

  RsqrtCounters& rc = s.rsqrt_counters();
  rc.invocations += 1;
  rc.elements += x.size();
  rc.muls += s.mul_elements() - muls_before;
  rc.stats += s.stats() - before;
  rc.seed_stats += seed_delta;
  return y;
}

}  // namespace rsqrt2pc::rsqrt
