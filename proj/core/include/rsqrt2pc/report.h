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
#include <string>
#include <vector>

#include "rsqrt2pc/cost_model.h"
#include "rsqrt2pc/ring.h"
#include "rsqrt2pc/rsqrt.h"
#include "rsqrt2pc/session.h"
#include "rsqrt2pc/toy_encoder.h"

namespace rsqrt2pc::bench {

enum class Scenario { kRsqrt, kLayerNorm, kActivation, kSoftmax, kEnd2End };

Scenario parse_scenario(const std::string& name);
const char* scenario_name(Scenario s);

struct ReportConfig {
  ring::FixedPointCodec codec;
  rsqrt::RsqrtConfig rsqrt;
  uint64_t seed = 1;
  // Problem size for the single-layer scenarios.
  size_t rows = 8;
  size_t width = 16;
  std::vector<int> lut_sigmas = {8, 12, 16};
  std::vector<double> lut_entries = {256.0, 4096.0, 65536.0};
  ToyEncoderConfig toy;
};

// "counted" rows come from live two-party runs, "modeled" rows replace the
// counted inverse-square-root traffic with a baseline's analytic cost.
struct ReportRow {
  std::string method;
  std::string kind;
  double online_bytes = 0.0;
  uint64_t rounds = 0;
  uint64_t muls = 0;
};

// Live measurement of one scenario, both parties combined.
struct Measured {
  uint64_t online_bytes = 0;
  uint64_t rounds = 0;
  uint64_t muls = 0;
  uint64_t rsqrt_invocations = 0;
  uint64_t rsqrt_elements = 0;
  uint64_t rsqrt_bytes = 0;
  uint64_t rsqrt_rounds = 0;
  uint64_t rsqrt_muls = 0;
  uint64_t seed_bytes = 0;
  uint64_t seed_rounds = 0;
};

Measured measure_scenario(Scenario sc, const ReportConfig& cfg);

// Bytes both parties put on the wire for one Beaver product.
double mul_wire_bytes(const ring::FixedPointCodec& codec);

std::vector<ReportRow> comm_report(Scenario sc, const ReportConfig& cfg);
// method,kind,online_bytes,rounds,muls
std::string report_csv(const std::vector<ReportRow>& rows);

}  // namespace rsqrt2pc::bench
