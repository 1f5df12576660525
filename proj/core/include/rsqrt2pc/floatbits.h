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

#include <cstdint>

#include "rsqrt2pc/ring.h"

namespace rsqrt2pc::floatbits {

// binary32 layout constants: L is the integer scale of the mantissa, B the
// exponent bias.
inline constexpr int64_t kL = int64_t{1} << 23;
inline constexpr int kB = 127;

// sign, biased exponent E and integer mantissa M of a binary32 value, so
// that v = (-1)^sign * (1 + M/L) * 2^(E-B).
struct FloatBits {
  uint32_t sign = 0;
  uint32_t E = 0;
  uint32_t M = 0;

  bool operator==(const FloatBits&) const = default;
};

// Exponent and mantissa read as one integer i = M + E*L. The sign lives
// outside the magnitude bits.
struct SignedBitsInteger {
  uint32_t sign = 0;
  int64_t magnitude_bits = 0;

  bool operator==(const SignedBitsInteger&) const = default;
};

// Throws UnsupportedValueError for zero, subnormal, NaN and Inf.
FloatBits decompose(float v);
// Throws UnsupportedValueError when a field is out of range or E is 0/255.
float compose(const FloatBits& fb);

SignedBitsInteger pack_integer(const FloatBits& fb);
// Throws RangeError for i outside [0, 2^31) and UnsupportedValueError when
// the exponent field would be 0 or 255.
FloatBits unpack_integer(int64_t i, uint32_t sign);

// Positive float whose packed bits are i.
float value_of_bits(int64_t i);
// Packed bits of |v|.
int64_t bits_of(float v);

// Nearest binary32 to decode(share). A decoded zero is rejected because
// nothing downstream can decompose it; callers floor magnitudes first.
float share_to_float(const ring::RingShare& share,
                     const ring::FixedPointCodec& codec);
float share_to_float(uint64_t value, const ring::FixedPointCodec& codec);

}  // namespace rsqrt2pc::floatbits
