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
#include "rsqrt2pc/dealer.h"

#include <cmath>

#include "rsqrt2pc/errors.h"
#include "rsqrt2pc/floatbits.h"

namespace rsqrt2pc {

Dealer::Dealer(uint64_t seed, ring::Party party, ring::FixedPointCodec codec)
    : party_(party), codec_(codec), rng_(seed) {}

uint64_t Dealer::split(uint64_t v) {
  const uint64_t r = codec_.wrap(rng_());
  return party_ == ring::Party::kClient ? r : codec_.wrap(v - r);
}

TripleBatch Dealer::triples(size_t n) {
  TripleBatch out;
  out.first_id = next_id_;
  out.a.resize(n);
  out.b.resize(n);
  out.c.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const uint64_t a = codec_.wrap(rng_());
    const uint64_t b = codec_.wrap(rng_());
    out.a[i] = split(a);
    out.b[i] = split(b);
    out.c[i] = split(codec_.wrap(a * b));
  }
  next_id_ += n;
  return out;
}

MatrixTriple Dealer::matrix_triple(size_t m, size_t k, size_t n) {
  MatrixTriple out{next_id_, m, k, n, {}, {}, {}};
  std::vector<uint64_t> a(m * k), b(k * n), c(m * n, 0);
  for (auto& v : a) v = codec_.wrap(rng_());
  for (auto& v : b) v = codec_.wrap(rng_());
  for (size_t i = 0; i < m; ++i) {
    for (size_t t = 0; t < k; ++t) {
      const uint64_t av = a[i * k + t];
      for (size_t j = 0; j < n; ++j) c[i * n + j] += av * b[t * n + j];
    }
  }
  out.a.reserve(a.size());
  out.b.reserve(b.size());
  out.c.reserve(c.size());
  for (auto v : a) out.a.push_back(split(v));
  for (auto v : b) out.b.push_back(split(v));
  for (auto v : c) out.c.push_back(split(codec_.wrap(v)));
  next_id_ += 1;
  return out;
}

SeedMaskBatch Dealer::seed_masks(size_t n, int max_shift) {
  if (max_shift < 0 || max_shift > codec_.frac_bits()) {
    throw ConfigError("seed mask shift must lie in [0, f]");
  }
  std::uniform_int_distribution<int> pick(0, max_shift);
  SeedMaskBatch out;
  out.shift_bits.resize(n);
  out.inv_scale.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const int k = pick(rng_);
    out.shift_bits[i] =
        split(codec_.from_signed(static_cast<int64_t>(k) * floatbits::kL));
    out.inv_scale[i] = split(codec_.encode(std::ldexp(1.0, -k)));
  }
  return out;
}

}  // namespace rsqrt2pc
