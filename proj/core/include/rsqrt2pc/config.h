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
#include <map>
#include <string>
#include <vector>

#include "rsqrt2pc/flood.h"
#include "rsqrt2pc/ring.h"
#include "rsqrt2pc/rsqrt.h"
#include "rsqrt2pc/toy_encoder.h"

namespace rsqrt2pc {

// Flat key=value settings. '#' starts a comment; blank lines are ignored.
class KeyValueConfig {
 public:
  static KeyValueConfig from_file(const std::string& path);
  static KeyValueConfig from_string(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  void set(const std::string& key, const std::string& value);
  std::vector<std::string> keys() const;

  double get_double(const std::string& key, double fallback) const;
  int64_t get_int(const std::string& key, int64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;

 private:
  std::map<std::string, std::string> values_;
};

// Every setting the tools understand. Keys:
//   ring_bits frac_bits flood_constant mask_spread expected_exponent
//   flooded b iterations strategy mask_shift sampler_family
//   sampler_location sampler_scale seed seq_len model_dim ffn_dim heads
//   weight_file host port
struct AppConfig {
  ring::FixedPointCodec codec;
  flood::FloodConfig flood;
  bool flooded = true;
  double b = 0.045;
  rsqrt::NewtonConfig newton;
  flood::SamplerParams sampler;
  uint64_t seed = 1;
  bench::ToyEncoderConfig toy;
  std::string host = "127.0.0.1";
  uint16_t port = 0;

  // Throws ConfigError on unknown keys or invalid values.
  static AppConfig from(const KeyValueConfig& kv);
  rsqrt::RsqrtConfig rsqrt() const;
};

}  // namespace rsqrt2pc
