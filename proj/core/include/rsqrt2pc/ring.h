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
#include <span>
#include <utility>
#include <vector>

namespace rsqrt2pc::ring {

enum class Party : uint8_t { kClient = 0, kServer = 1 };

inline const char* party_name(Party p) {
  return p == Party::kClient ? "client" : "server";
}

inline Party peer_of(Party p) {
  return p == Party::kClient ? Party::kServer : Party::kClient;
}

// Fixed-point encoding of reals into Z_{2^l} with f fraction bits and
// two's-complement signed interpretation.
class FixedPointCodec {
 public:
  FixedPointCodec() : FixedPointCodec(64, 16) {}
  FixedPointCodec(int ring_bits, int frac_bits);

  int ring_bits() const { return l_; }
  int frac_bits() const { return f_; }
  uint64_t mask() const { return mask_; }
  // Bytes used to put one ring element on the wire.
  size_t element_bytes() const { return static_cast<size_t>((l_ + 7) / 8); }

  // Representable range is [min_value(), max_value()).
  double min_value() const;
  double max_value() const;
  double resolution() const;

  // round(x * 2^f) mod 2^l; throws RangeError outside the range.
  uint64_t encode(double x) const;
  double decode(uint64_t v) const;

  uint64_t wrap(uint64_t v) const { return v & mask_; }
  int64_t to_signed(uint64_t v) const;
  uint64_t from_signed(int64_t v) const { return wrap(static_cast<uint64_t>(v)); }

  bool operator==(const FixedPointCodec& o) const {
    return l_ == o.l_ && f_ == o.f_;
  }

 private:
  int l_;
  int f_;
  uint64_t mask_;
};

// One party's additive share of a value in Z_{2^l}.
struct RingShare {
  Party party = Party::kClient;
  uint64_t value = 0;
};

// Uniform element of the ring.
uint64_t random_element(std::mt19937_64& rng, const FixedPointCodec& codec);

// Splits x as (r, encode(x) - r) with r uniform.
std::pair<RingShare, RingShare> make_shares(double x,
                                            const FixedPointCodec& codec,
                                            std::mt19937_64& rng);
// Same, with the client mask given explicitly.
std::pair<RingShare, RingShare> make_shares_with_mask(
    double x, uint64_t mask, const FixedPointCodec& codec);

// Raw ring sum of the two shares. Order of arguments is irrelevant but the
// parties must differ.
uint64_t reconstruct_raw(const RingShare& a, const RingShare& b,
                         const FixedPointCodec& codec);
double reconstruct(const RingShare& a, const RingShare& b,
                   const FixedPointCodec& codec);

// sum(coeff_i * share_i) (+ constant when the shares belong to the server).
RingShare linear_combine(std::span<const RingShare> shares,
                         std::span<const int64_t> coeffs, uint64_t constant,
                         const FixedPointCodec& codec);

// Local probabilistic truncation by \p bits. The reconstructed value is
// off by at most one unit in the last place, except with probability about
// |value| / 2^(l-1), in which case it is garbage.
RingShare truncate_local(const RingShare& share, int bits,
                         const FixedPointCodec& codec);
uint64_t truncate_local(Party party, uint64_t value, int bits,
                        const FixedPointCodec& codec);

// Element-wise helpers used by the protocol layers.
void add_inplace(std::span<uint64_t> dst, std::span<const uint64_t> src,
                 const FixedPointCodec& codec);
void sub_inplace(std::span<uint64_t> dst, std::span<const uint64_t> src,
                 const FixedPointCodec& codec);
std::vector<uint64_t> truncate_local(Party party,
                                     std::span<const uint64_t> values,
                                     int bits, const FixedPointCodec& codec);
// Adds an encoded public constant; only the server's share moves.
void add_public_inplace(Party party, std::span<uint64_t> dst, uint64_t constant,
                        const FixedPointCodec& codec);
// Multiplies by a public real and truncates back to scale 2^f.
std::vector<uint64_t> mul_public(Party party, std::span<const uint64_t> values,
                                 double c, const FixedPointCodec& codec);

}  // namespace rsqrt2pc::ring
