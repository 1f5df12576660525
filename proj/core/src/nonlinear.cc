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
#include "rsqrt2pc/nonlinear.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rsqrt2pc/errors.h"

namespace rsqrt2pc::nonlinear {

SmuParams SmuParams::gelu() { return SmuParams{0.0, 1.0 / std::sqrt(2.0)}; }
SmuParams SmuParams::relu() { return SmuParams{0.0, 0.0}; }

void SmuParams::validate() const {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in [0, 1)");
  if (!(mu >= 0.0)) throw ConfigError("mu must be non-negative");
}

double smu_plain(double x, const SmuParams& p) {
  const double s = (1.0 - p.alpha) * x * x + p.mu * p.mu;
  return (1.0 + p.alpha) / 2.0 * x +
         s / (2.0 * std::sqrt(std::max(s, rsqrt::kMagnitudeFloor)));
}

double gelu_plain(double x) {
  return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0)));
}

std::vector<double> softmax_plain(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  if (out.empty()) return out;
  const double m = *std::max_element(out.begin(), out.end());
  double sum = 0.0;
  for (auto& e : out) sum += (e = std::exp(e - m));
  for (auto& e : out) e /= sum;
  return out;
}

std::vector<double> softmax_star_plain(std::span<const double> v, double eps) {
  std::vector<double> out(v.size());
  double sum = 0.0;
  for (size_t i = 0; i < v.size(); ++i) sum += (out[i] = std::max(v[i], 0.0));
  for (auto& e : out) e /= (sum + eps);
  return out;
}

std::vector<double> layernorm_plain(std::span<const double> x,
                                    std::span<const double> gamma,
                                    std::span<const double> beta, double eps) {
  const size_t n = x.size();
  if (n < 2 || gamma.size() != n || beta.size() != n) {
    throw UsageError("layernorm needs length >= 2 and matching gamma/beta");
  }
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= n;
  const double inv = 1.0 / std::sqrt(var + eps);
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = (x[i] - mean) * inv * gamma[i] + beta[i];
  return out;
}

size_t TensorShares::size() const {
  size_t n = 1;
  for (size_t d : shape) n *= d;
  return shape.empty() ? 0 : n;
}

size_t TensorShares::last_dim() const {
  if (shape.empty()) throw UsageError("tensor has no axes");
  return shape.back();
}

void TensorShares::check() const {
  if (size() != data.size()) {
    throw UsageError("tensor shape does not match its element count");
  }
}

namespace {

Shares negate(const Shares& v, const ring::FixedPointCodec& codec) {
  Shares out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = codec.wrap(uint64_t{0} - v[i]);
  return out;
}

// Row sums over the last axis.
Shares row_sums(const Shares& v, size_t rows, size_t k,
                const ring::FixedPointCodec& codec) {
  Shares out(rows, 0);
  for (size_t r = 0; r < rows; ++r) {
    for (size_t j = 0; j < k; ++j) out[r] += v[r * k + j];
    out[r] = codec.wrap(out[r]);
  }
  return out;
}

Shares broadcast_rows(const Shares& per_row, size_t k) {
  Shares out(per_row.size() * k);
  for (size_t r = 0; r < per_row.size(); ++r) {
    std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(r * k), k, per_row[r]);
  }
  return out;
}

}  // namespace

TensorShares smu_shared(Session& s, const TensorShares& x, const SmuParams& p,
                        const rsqrt::RsqrtConfig& cfg) {
  p.validate();
  x.check();
  const auto& codec = s.codec();
  Shares sq = s.mul(x.data, x.data);
  if (p.alpha != 0.0) sq = ring::mul_public(s.party(), sq, 1.0 - p.alpha, codec);
  // Truncation can leave x^2 one unit below zero; flooring the radicand at
  // two units keeps the rsqrt operand positive.
  const double radicand_floor = std::max(p.mu * p.mu, 2 * codec.resolution());
  ring::add_public_inplace(s.party(), sq, codec.encode(radicand_floor), codec);
  const Shares inv = rsqrt::rsqrt_shared(s, sq, cfg);
  const Shares root = s.mul(sq, inv);

  Shares lin = p.alpha == 0.0
                   ? ring::truncate_local(s.party(), x.data, 1, codec)
                   : ring::mul_public(s.party(), x.data, (1.0 + p.alpha) / 2.0,
                                      codec);
  const Shares half_root = ring::truncate_local(s.party(), root, 1, codec);
  ring::add_inplace(lin, half_root, codec);
  return TensorShares{x.shape, std::move(lin)};
}

TensorShares softmax_star_shared(Session& s, const TensorShares& v,
                                 const SoftmaxStarConfig& cfg) {
  v.check();
  const auto& codec = s.codec();
  const size_t k = v.last_dim();
  const size_t rows = k ? v.size() / k : 0;
  const TensorShares num = smu_shared(s, v, SmuParams::relu(), cfg.relu);
  Shares denom = row_sums(num.data, rows, k, codec);
  ring::add_public_inplace(s.party(), denom, codec.encode(cfg.eps), codec);
  const Shares inv = rsqrt::rsqrt_shared(s, denom, cfg.reciprocal);
  const Shares recip = s.mul(inv, inv);
  return TensorShares{v.shape, s.mul(num.data, broadcast_rows(recip, k))};
}

TensorShares layernorm_shared(Session& s, const TensorShares& x,
                              std::span<const double> gamma,
                              std::span<const double> beta,
                              const LayerNormConfig& cfg) {
  x.check();
  const auto& codec = s.codec();
  const size_t k = x.last_dim();
  if (k < 2 || gamma.size() != k || beta.size() != k) {
    throw UsageError("layernorm needs length >= 2 and matching gamma/beta");
  }
  const size_t rows = x.size() / k;
  const double inv_k = 1.0 / static_cast<double>(k);

  const Shares mean =
      ring::mul_public(s.party(), row_sums(x.data, rows, k, codec), inv_k, codec);
  Shares centred = x.data;
  ring::add_inplace(centred, negate(broadcast_rows(mean, k), codec), codec);

  const Shares sq = s.mul(centred, centred);
  Shares var =
      ring::mul_public(s.party(), row_sums(sq, rows, k, codec), inv_k, codec);
  ring::add_public_inplace(s.party(), var, codec.encode(cfg.eps), codec);
  const Shares inv = rsqrt::rsqrt_shared(s, var, cfg.rsqrt);
  Shares normed = s.mul(centred, broadcast_rows(inv, k));

  for (size_t r = 0; r < rows; ++r) {
    for (size_t j = 0; j < k; ++j) {
      uint64_t& e = normed[r * k + j];
      if (gamma[j] != 1.0) {
        e = ring::truncate_local(s.party(), codec.wrap(e * codec.encode(gamma[j])),
                                 codec.frac_bits(), codec);
      }
      if (s.is_server()) e = codec.wrap(e + codec.encode(beta[j]));
    }
  }
  return TensorShares{x.shape, std::move(normed)};
}

}  // namespace rsqrt2pc::nonlinear
