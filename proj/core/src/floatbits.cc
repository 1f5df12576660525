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
#include "rsqrt2pc/floatbits.h"

#include <bit>
#include <cmath>
#include <string>

#include "rsqrt2pc/errors.h"

namespace rsqrt2pc::floatbits {

FloatBits decompose(float v) {
  if (!std::isnormal(v)) {
    throw UnsupportedValueError(
        "decompose accepts finite normal nonzero values only, got " +
        std::to_string(v));
  }
  const auto bits = std::bit_cast<uint32_t>(v);
  return FloatBits{bits >> 31, (bits >> 23) & 0xffu, bits & 0x7fffffu};
}

float compose(const FloatBits& fb) {
  if (fb.sign > 1 || fb.M >= static_cast<uint32_t>(kL) || fb.E == 0 ||
      fb.E >= 255) {
    throw UnsupportedValueError("invalid FloatBits fields (sign=" +
                                std::to_string(fb.sign) +
                                ", E=" + std::to_string(fb.E) +
                                ", M=" + std::to_string(fb.M) + ")");
  }
  return std::bit_cast<float>((fb.sign << 31) | (fb.E << 23) | fb.M);
}

SignedBitsInteger pack_integer(const FloatBits& fb) {
  if (fb.E == 0 || fb.E >= 255 || fb.M >= static_cast<uint32_t>(kL) ||
      fb.sign > 1) {
    throw UnsupportedValueError("pack_integer: exponent must be in [1, 254]");
  }
  return SignedBitsInteger{fb.sign, static_cast<int64_t>(fb.M) +
                                        static_cast<int64_t>(fb.E) * kL};
}

FloatBits unpack_integer(int64_t i, uint32_t sign) {
  if (i < 0 || i >= (int64_t{1} << 31)) {
    throw RangeError("packed integer " + std::to_string(i) +
                     " outside [0, 2^31)");
  }
  if (sign > 1) throw UsageError("sign must be 0 or 1");
  FloatBits fb{sign, static_cast<uint32_t>(i / kL),
               static_cast<uint32_t>(i % kL)};
  if (fb.E == 0 || fb.E == 255) {
    throw UnsupportedValueError("packed integer " + std::to_string(i) +
                                " has reserved exponent " +
                                std::to_string(fb.E));
  }
  return fb;
}

float value_of_bits(int64_t i) { return compose(unpack_integer(i, 0)); }

int64_t bits_of(float v) {
  return pack_integer(decompose(std::fabs(v))).magnitude_bits;
}

float share_to_float(uint64_t value, const ring::FixedPointCodec& codec) {
  const double d = codec.decode(value);
  if (d == 0.0) {
    throw UnsupportedValueError("share decodes to zero");
  }
  return static_cast<float>(d);
}

float share_to_float(const ring::RingShare& share,
                     const ring::FixedPointCodec& codec) {
  return share_to_float(share.value, codec);
}

}  // namespace rsqrt2pc::floatbits
