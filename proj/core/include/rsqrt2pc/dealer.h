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
#include <cstdint>
#include <random>
#include <vector>

#include "rsqrt2pc/ring.h"

namespace rsqrt2pc {

// This party's half of n Beaver triples. Ids are consecutive from first_id.
struct TripleBatch {
  uint64_t first_id = 0;
  std::vector<uint64_t> a;
  std::vector<uint64_t> b;
  std::vector<uint64_t> c;

  size_t size() const { return a.size(); }
};

// Shares of A (m x k), B (k x n) and C = A*B in raw ring arithmetic.
struct MatrixTriple {
  uint64_t id = 0;
  size_t m = 0, k = 0, n = 0;
  std::vector<uint64_t> a;
  std::vector<uint64_t> b;
  std::vector<uint64_t> c;
};

// Material for opening a seed integer under an exponent shift:
// additive shares of the integer shift*L and fixed-point shares of
// 2^-shift.
struct SeedMaskBatch {
  std::vector<uint64_t> shift_bits;
  std::vector<uint64_t> inv_scale;
};

// Simulated trusted dealer. Both parties construct one with the same seed;
// each instance replays the same correlated randomness and keeps only its
// own half, so no dealer traffic ever touches a channel.
class Dealer {
 public:
  Dealer(uint64_t seed, ring::Party party, ring::FixedPointCodec codec);

  TripleBatch triples(size_t n);
  MatrixTriple matrix_triple(size_t m, size_t k, size_t n);
  SeedMaskBatch seed_masks(size_t n, int max_shift);

  // Count of scalar triples handed out so far (matrix triples count once).
  uint64_t issued() const { return next_id_; }

 private:
  // Returns this party's share of v and advances the stream.
  uint64_t split(uint64_t v);

  ring::Party party_;
  ring::FixedPointCodec codec_;
  std::mt19937_64 rng_;
  uint64_t next_id_ = 0;
};

}  // namespace rsqrt2pc
