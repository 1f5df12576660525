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
#include "rsqrt2pc/cost_model.h"

#include <array>
#include <cmath>
#include <string>

#include "rsqrt2pc/errors.h"

namespace rsqrt2pc::bench {

void LutCostModel::validate() const {
  if (sigma < 1 || sigma > 62) throw ConfigError("sigma must be in [1, 62]");
  if (!(entries >= 1.0) || entries > std::ldexp(1.0, sigma)) {
    throw ConfigError("LUT entries must lie in [1, 2^sigma]");
  }
  if (alpha_bits < 1) throw ConfigError("alpha_bits must be positive");
}

LutCost lut_cost(const LutCostModel& model, uint64_t calls) {
  model.validate();
  const double c = static_cast<double>(calls);
  return LutCost{c * (model.entries * model.alpha_bits + model.sigma),
                 c * (std::ldexp(1.0, model.sigma) - std::log2(model.entries))};
}

double taylor_seed(double x, int order) {
  // Coefficients of (1 + t)^(-1/2).
  static constexpr std::array<double, 8> kCoeff = {
      1.0, -0.5, 0.375, -0.3125, 0.2734375, -0.24609375, 0.2255859375,
      -0.20947265625};
  if (order < 0 || order >= static_cast<int>(kCoeff.size())) {
    throw ConfigError("taylor order must be in [0, 7], got " +
                      std::to_string(order));
  }
  if (!(x > 0.0)) throw DomainError("taylor_seed needs x > 0");
  const double t = x - 1.0;
  double acc = kCoeff[static_cast<size_t>(order)];
  for (int k = order - 1; k >= 0; --k) acc = acc * t + kCoeff[static_cast<size_t>(k)];
  return acc;
}

int taylor_seed_muls(int order) {
  if (order < 0 || order > 7) throw ConfigError("taylor order must be in [0, 7]");
  return order;
}

double crypten_seed(double x) {
  if (!(x > 0.0)) throw DomainError("crypten_seed needs x > 0");
  return 2.2 * std::exp(-0.5 * x + 0.2) + 0.2;
}

int crypten_seed_muls(int exp_squarings) {
  if (exp_squarings < 0) throw ConfigError("squarings must be non-negative");
  return exp_squarings;
}

}  // namespace rsqrt2pc::bench
