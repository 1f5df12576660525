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
#include "rsqrt2pc/ring.h"

#include <cmath>
#include <string>

#include "rsqrt2pc/errors.h"

namespace rsqrt2pc::ring {

FixedPointCodec::FixedPointCodec(int ring_bits, int frac_bits)
    : l_(ring_bits), f_(frac_bits) {
  if (!(2 <= f_ && f_ < l_ && l_ <= 64)) {
    throw ConfigError("codec requires 2 <= f < l <= 64, got l=" +
                      std::to_string(l_) + " f=" + std::to_string(f_));
  }
  mask_ = l_ == 64 ? ~uint64_t{0} : ((uint64_t{1} << l_) - 1);
}

double FixedPointCodec::min_value() const {
  return -std::ldexp(1.0, l_ - 1 - f_);
}

double FixedPointCodec::max_value() const {
  return std::ldexp(1.0, l_ - 1 - f_);
}

double FixedPointCodec::resolution() const { return std::ldexp(1.0, -f_); }

uint64_t FixedPointCodec::encode(double x) const {
  if (!std::isfinite(x)) {
    throw RangeError("cannot encode non-finite value");
  }
  const double scaled = std::nearbyint(std::ldexp(x, f_));
  const double limit = std::ldexp(1.0, l_ - 1);
  if (scaled < -limit || scaled >= limit) {
    throw RangeError("value " + std::to_string(x) +
                     " outside fixed-point range [" +
                     std::to_string(min_value()) + ", " +
                     std::to_string(max_value()) + ")");
  }
  return from_signed(static_cast<int64_t>(scaled));
}

int64_t FixedPointCodec::to_signed(uint64_t v) const {
  v = wrap(v);
  if (l_ == 64) return static_cast<int64_t>(v);
  const uint64_t sign_bit = uint64_t{1} << (l_ - 1);
  if (v & sign_bit) {
    return static_cast<int64_t>(v) - static_cast<int64_t>(uint64_t{1} << l_);
  }
  return static_cast<int64_t>(v);
}

double FixedPointCodec::decode(uint64_t v) const {
  return std::ldexp(static_cast<double>(to_signed(v)), -f_);
}

uint64_t random_element(std::mt19937_64& rng, const FixedPointCodec& codec) {
  return codec.wrap(rng());
}

std::pair<RingShare, RingShare> make_shares_with_mask(
    double x, uint64_t mask, const FixedPointCodec& codec) {
  const uint64_t enc = codec.encode(x);
  return {RingShare{Party::kClient, codec.wrap(mask)},
          RingShare{Party::kServer, codec.wrap(enc - mask)}};
}

std::pair<RingShare, RingShare> make_shares(double x,
                                            const FixedPointCodec& codec,
                                            std::mt19937_64& rng) {
  return make_shares_with_mask(x, random_element(rng, codec), codec);
}

uint64_t reconstruct_raw(const RingShare& a, const RingShare& b,
                         const FixedPointCodec& codec) {
  if (a.party == b.party) {
    throw UsageError(std::string("reconstruct needs one share per party, got "
                                 "two ") +
                     party_name(a.party) + " shares");
  }
  return codec.wrap(a.value + b.value);
}

double reconstruct(const RingShare& a, const RingShare& b,
                   const FixedPointCodec& codec) {
  return codec.decode(reconstruct_raw(a, b, codec));
}

RingShare linear_combine(std::span<const RingShare> shares,
                         std::span<const int64_t> coeffs, uint64_t constant,
                         const FixedPointCodec& codec) {
  if (shares.size() != coeffs.size()) {
    throw UsageError("linear_combine: shares/coeffs length mismatch");
  }
  if (shares.empty()) {
    throw UsageError("linear_combine: need at least one share to fix the party");
  }
  const Party party = shares.front().party;
  uint64_t acc = 0;
  for (size_t i = 0; i < shares.size(); ++i) {
    if (shares[i].party != party) {
      throw UsageError("linear_combine: mixed-party input");
    }
    acc += static_cast<uint64_t>(coeffs[i]) * shares[i].value;
  }
  if (party == Party::kServer) acc += constant;
  return RingShare{party, codec.wrap(acc)};
}

uint64_t truncate_local(Party party, uint64_t value, int bits,
                        const FixedPointCodec& codec) {
  value = codec.wrap(value);
  if (party == Party::kClient) {
    return value >> bits;
  }
  const uint64_t neg = codec.wrap(uint64_t{0} - value);
  return codec.wrap(uint64_t{0} - (neg >> bits));
}

RingShare truncate_local(const RingShare& share, int bits,
                         const FixedPointCodec& codec) {
  return RingShare{share.party,
                   truncate_local(share.party, share.value, bits, codec)};
}

std::vector<uint64_t> truncate_local(Party party,
                                     std::span<const uint64_t> values,
                                     int bits, const FixedPointCodec& codec) {
  std::vector<uint64_t> out(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    out[i] = truncate_local(party, values[i], bits, codec);
  }
  return out;
}

void add_inplace(std::span<uint64_t> dst, std::span<const uint64_t> src,
                 const FixedPointCodec& codec) {
  if (dst.size() != src.size()) throw UsageError("add: length mismatch");
  for (size_t i = 0; i < dst.size(); ++i) dst[i] = codec.wrap(dst[i] + src[i]);
}

void sub_inplace(std::span<uint64_t> dst, std::span<const uint64_t> src,
                 const FixedPointCodec& codec) {
  if (dst.size() != src.size()) throw UsageError("sub: length mismatch");
  for (size_t i = 0; i < dst.size(); ++i) dst[i] = codec.wrap(dst[i] - src[i]);
}

void add_public_inplace(Party party, std::span<uint64_t> dst, uint64_t constant,
                        const FixedPointCodec& codec) {
  if (party != Party::kServer) return;
  for (auto& v : dst) v = codec.wrap(v + constant);
}

std::vector<uint64_t> mul_public(Party party, std::span<const uint64_t> values,
                                 double c, const FixedPointCodec& codec) {
  const uint64_t k = codec.encode(c);
  std::vector<uint64_t> out(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    out[i] = truncate_local(party, codec.wrap(values[i] * k), codec.frac_bits(),
                            codec);
  }
  return out;
}

}  // namespace rsqrt2pc::ring
