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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rsqrt2pc/ring.h"
#include "rsqrt2pc/session.h"

namespace rsqrt2pc::flood {

// Masks are F + r with r uniform in [mask_floor(), mask_spread). E_m is the
// biased exponent the operands are expected to live in.
struct FloodConfig {
  double F = 8192.0;
  double mask_spread = 4096.0;
  int E_m = 128;

  // Biased binary32 exponent of F.
  int E_f() const;
  // Smallest offset drawn. For |x| below it, x - mask never leaves the
  // binade of F, so the client's exponent field says nothing about x.
  double mask_floor() const { return std::min(F / 64, mask_spread); }
  void validate() const;
};

// F + r. Throws ConfigError when |r| >= F/2.
double flood_mask(double r, double F);

// (x - mask, mask): the client share is negative, the server share positive.
std::pair<ring::RingShare, ring::RingShare> flood_share(
    double x, double mask, const ring::FixedPointCodec& codec);

// Real-valued halves of a split: client + server = x.
struct SplitValues {
  double client = 0.0;
  double server = 0.0;
};

// Positive split of x > 0 whose binary32 exponents differ by exactly gap;
// the client holds the small part. u in [0, 1) picks a point inside the
// feasible interval. Throws DomainError when no such split exists.
SplitValues adversarial_split_values(double x, int gap, double u);
std::pair<ring::RingShare, ring::RingShare> adversarial_split(
    double x, int gap, const ring::FixedPointCodec& codec,
    std::mt19937_64& rng);

// Biased binary32 exponent of |v| (v nonzero and normal).
int exponent_of(double v);

enum class Family { kGaussian, kLaplace, kLogNormal };

Family parse_family(const std::string& name);
const char* family_name(Family f);

// Gaussian and Laplace are centred at location with the given scale.
// LogNormal draws exp(N(log(location), scale)), so location is the median.
struct SamplerParams {
  Family family = Family::kGaussian;
  double location = 0.0;
  double scale = 1.0;

  // Positive operands whose median sits in the middle of binade E_m.
  static SamplerParams rsqrt_operands(int E_m);
  void validate() const;
};

class ActivationSampler {
 public:
  ActivationSampler(SamplerParams params, uint64_t seed);

  double sample();
  std::vector<double> sample(size_t n);
  const SamplerParams& params() const { return params_; }

 private:
  SamplerParams params_;
  std::mt19937_64 rng_;
};

// Re-randomises shares into flooded form. The server draws a fresh mask m
// and sends its share minus m; afterwards the server holds m and the
// client holds x - m. One message, one element per value.
Shares flood_reshare(Session& s, std::span<const uint64_t> x,
                     const FloodConfig& cfg);

// How an expected exponent is read off sample operands.
//   kModal: the most frequent biased exponent (ties go to the larger one).
//   kCoverMax: one below the exponent of the largest magnitude, which keeps
//     the largest operand inside the region where the flooded seed still
//     converges instead of overshooting.
enum class Calibration { kModal, kCoverMax };

// Throws UsageError when every value is zero.
int calibrate_exponent(std::span<const double> values,
                       Calibration policy = Calibration::kModal);

}  // namespace rsqrt2pc::flood
