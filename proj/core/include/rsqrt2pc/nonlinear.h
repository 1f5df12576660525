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

#include <cstddef>
#include <span>
#include <vector>

#include "rsqrt2pc/rsqrt.h"
#include "rsqrt2pc/session.h"

namespace rsqrt2pc::nonlinear {

// smu(x) = (1+a)/2 x + sqrt((1-a) x^2 + mu^2) / 2
struct SmuParams {
  double alpha = 0.0;
  double mu = 0.0;

  static SmuParams gelu();
  static SmuParams relu();
  void validate() const;
};

double smu_plain(double x, const SmuParams& p);
double gelu_plain(double x);
std::vector<double> softmax_plain(std::span<const double> v);
// ReLU(v) / (sum ReLU(v) + eps)
std::vector<double> softmax_star_plain(std::span<const double> v,
                                       double eps = 0x1p-12);
std::vector<double> layernorm_plain(std::span<const double> x,
                                    std::span<const double> gamma,
                                    std::span<const double> beta,
                                    double eps = 1e-5);

// Row-major shares; the last axis is the reduction axis for softmax and
// layer norm.
struct TensorShares {
  std::vector<size_t> shape;
  Shares data;

  size_t size() const;
  size_t last_dim() const;
  void check() const;
};

TensorShares smu_shared(Session& s, const TensorShares& x, const SmuParams& p,
                        const rsqrt::RsqrtConfig& cfg);

struct SoftmaxStarConfig {
  rsqrt::RsqrtConfig relu;
  rsqrt::RsqrtConfig reciprocal;
  double eps = 0x1p-12;
};

// Numerators through smu with the ReLU preset, reciprocal of the row sum
// as the square of its inverse square root.
TensorShares softmax_star_shared(Session& s, const TensorShares& v,
                                 const SoftmaxStarConfig& cfg);

struct LayerNormConfig {
  rsqrt::RsqrtConfig rsqrt;
  double eps = 1e-5;
};

// gamma and beta are public and have last_dim() entries each.
TensorShares layernorm_shared(Session& s, const TensorShares& x,
                              std::span<const double> gamma,
                              std::span<const double> beta,
                              const LayerNormConfig& cfg);

}  // namespace rsqrt2pc::nonlinear
