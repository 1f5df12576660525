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
#include "rsqrt2pc/flood.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "rsqrt2pc/errors.h"
#include "rsqrt2pc/floatbits.h"

namespace rsqrt2pc::flood {

int exponent_of(double v) {
  return static_cast<int>(
      floatbits::decompose(static_cast<float>(std::fabs(v))).E);
}

int FloodConfig::E_f() const { return exponent_of(F); }

void FloodConfig::validate() const {
  if (!(F > 0.0) || !std::isfinite(F)) {
    throw ConfigError("flood constant must be positive and finite");
  }
  if (!(mask_spread >= 0.0) || mask_spread > F / 2) {
    throw ConfigError("mask_spread must lie in [0, F/2]");
  }
  if (E_m < 1 || E_m > 254) throw ConfigError("E_m must be in [1, 254]");
}

double flood_mask(double r, double F) {
  if (!(std::fabs(r) < F / 2)) {
    throw ConfigError("flood mask offset " + std::to_string(r) +
                      " is not below F/2");
  }
  return F + r;
}

std::pair<ring::RingShare, ring::RingShare> flood_share(
    double x, double mask, const ring::FixedPointCodec& codec) {
  const uint64_t m = codec.encode(mask);
  const uint64_t v = codec.encode(x);
  return {ring::RingShare{ring::Party::kClient, codec.wrap(v - m)},
          ring::RingShare{ring::Party::kServer, m}};
}

SplitValues adversarial_split_values(double x, int gap, double u) {
  if (!(x > 0.0) || gap < 0) {
    throw DomainError("adversarial_split needs x > 0 and gap >= 0");
  }
  const int ex = std::ilogb(x);
  // The large part sits in binade ex or ex - 1; the small part gap below.
  for (int e_big = ex; e_big >= ex - 1; --e_big) {
    const int e_small = e_big - gap;
    double lo = std::max(std::ldexp(1.0, e_small), x - std::ldexp(1.0, e_big + 1));
    double hi = std::min(std::ldexp(1.0, e_small + 1), x - std::ldexp(1.0, e_big));
    // Keep clear of the binade edges so float rounding cannot move either
    // part across one.
    const double pad = std::ldexp(1.0, e_small - 24);
    lo += pad;
    hi -= pad;
    if (hi > lo) {
      const double small = lo + u * (hi - lo);
      const SplitValues out{small, x - small};
      if (exponent_of(out.server) - exponent_of(out.client) == gap) return out;
    }
  }
  throw DomainError("no split of " + std::to_string(x) + " with gap " +
                    std::to_string(gap));
}

std::pair<ring::RingShare, ring::RingShare> adversarial_split(
    double x, int gap, const ring::FixedPointCodec& codec,
    std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const uint64_t total = codec.encode(x);
  // Quantization can push a part across a binade edge; redraw until the
  // encoded shares show the requested gap.
  for (int attempt = 0; attempt < 64; ++attempt) {
    const SplitValues v = adversarial_split_values(x, gap, unif(rng));
    const uint64_t server = codec.encode(v.server);
    const uint64_t client = codec.wrap(total - server);
    const double dc = codec.decode(client);
    const double ds = codec.decode(server);
    if (dc > 0.0 && ds > 0.0 && exponent_of(ds) - exponent_of(dc) == gap) {
      return {ring::RingShare{ring::Party::kClient, client},
              ring::RingShare{ring::Party::kServer, server}};
    }
  }
  throw DomainError("cannot realise gap " + std::to_string(gap) + " for " +
                    std::to_string(x) + " at this fixed-point resolution");
}

Family parse_family(const std::string& name) {
  if (name == "gaussian") return Family::kGaussian;
  if (name == "laplace") return Family::kLaplace;
  if (name == "lognormal") return Family::kLogNormal;
  throw ConfigError("unknown sampler family '" + name + "'");
}

const char* family_name(Family f) {
  switch (f) {
    case Family::kGaussian: return "gaussian";
    case Family::kLaplace: return "laplace";
    case Family::kLogNormal: return "lognormal";
  }
  return "?";
}

SamplerParams SamplerParams::rsqrt_operands(int E_m) {
  return SamplerParams{Family::kLogNormal,
                       1.5 * std::ldexp(1.0, E_m - floatbits::kB), 0.35};
}

void SamplerParams::validate() const {
  if (!(scale > 0.0)) throw ConfigError("sampler scale must be positive");
  if (family == Family::kLogNormal && !(location > 0.0)) {
    throw ConfigError("lognormal location (median) must be positive");
  }
}

ActivationSampler::ActivationSampler(SamplerParams params, uint64_t seed)
    : params_(params), rng_(seed) {
  params_.validate();
}

double ActivationSampler::sample() {
  switch (params_.family) {
    case Family::kGaussian: {
      std::normal_distribution<double> d(params_.location, params_.scale);
      return d(rng_);
    }
    case Family::kLaplace: {
      std::exponential_distribution<double> e(1.0 / params_.scale);
      std::bernoulli_distribution coin(0.5);
      const double mag = e(rng_);
      return params_.location + (coin(rng_) ? mag : -mag);
    }
    case Family::kLogNormal: {
      std::lognormal_distribution<double> d(std::log(params_.location),
                                            params_.scale);
      return d(rng_);
    }
  }
  return 0.0;
}

std::vector<double> ActivationSampler::sample(size_t n) {
  std::vector<double> out(n);
  for (auto& v : out) v = sample();
  return out;
}

Shares flood_reshare(Session& s, std::span<const uint64_t> x,
                     const FloodConfig& cfg) {
  cfg.validate();
  const auto& codec = s.codec();
  if (s.is_server()) {
    std::uniform_real_distribution<double> offset(cfg.mask_floor(),
                                                  cfg.mask_spread);
    Shares masks(x.size()), outgoing(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
      const double r = cfg.mask_spread > cfg.mask_floor() ? offset(s.rng())
                                                          : cfg.mask_floor();
      masks[i] = codec.encode(flood_mask(r, cfg.F));
      outgoing[i] = codec.wrap(x[i] - masks[i]);
    }
    s.send(outgoing);
    return masks;
  }
  Shares out = s.recv(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = codec.wrap(out[i] + x[i]);
  return out;
}

int calibrate_exponent(std::span<const double> values, Calibration policy) {
  std::map<int, size_t> counts;
  for (double v : values) {
    if (v != 0.0 && std::isfinite(v)) counts[exponent_of(v)]++;
  }
  if (counts.empty()) throw UsageError("calibration needs a nonzero value");
  if (policy == Calibration::kCoverMax) {
    return std::max(1, counts.rbegin()->first - 1);
  }
  int best = counts.begin()->first;
  size_t best_count = 0;
  for (const auto& [e, c] : counts) {
    if (c >= best_count) {
      best = e;
      best_count = c;
    }
  }
  return best;
}

}  // namespace rsqrt2pc::flood
