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
#include <string>
#include <vector>

#include "rsqrt2pc/nonlinear.h"
#include "rsqrt2pc/session.h"
#include "rsqrt2pc/transport.h"

namespace rsqrt2pc::bench {

// One post-norm encoder block: attention, residual, LayerNorm, a GeLU
// feed-forward (smu preset), residual, LayerNorm. Attention weights use
// Softmax* (ReLU over its row sum).
struct ToyEncoderConfig {
  size_t seq_len = 8;
  size_t model_dim = 16;
  size_t ffn_dim = 32;
  size_t heads = 1;
  uint64_t weight_seed = 7;
  // Optional CSV weight file; empty means seeded random weights.
  std::string weight_file;

  void validate() const;
};

// Row-major matrices, (in x out) for projections.
struct ToyWeights {
  std::vector<double> wq, wk, wv, wo;
  std::vector<double> w1, w2;
  std::vector<double> ln1_gamma, ln1_beta, ln2_gamma, ln2_beta;

  static ToyWeights random(const ToyEncoderConfig& cfg);
  static ToyWeights zeros(const ToyEncoderConfig& cfg);
  // One line per tensor: name followed by its values, comma separated.
  // Names: wq wk wv wo w1 w2 ln1_gamma ln1_beta ln2_gamma ln2_beta.
  static ToyWeights load_csv(const std::string& path,
                             const ToyEncoderConfig& cfg);
  static ToyWeights load(const ToyEncoderConfig& cfg);
  void check(const ToyEncoderConfig& cfg) const;
};

// Per-site protocol settings for the non-linear layers.
struct SiteConfigs {
  nonlinear::SoftmaxStarConfig softmax;
  rsqrt::RsqrtConfig gelu;
  nonlinear::LayerNormConfig ln1;
  nonlinear::LayerNormConfig ln2;
};

// Every site gets the same rsqrt settings.
SiteConfigs uniform_sites(const rsqrt::RsqrtConfig& base);

// Operands each rsqrt site sees in a plaintext run.
struct SiteTraces {
  std::vector<double> softmax_relu;
  std::vector<double> softmax_denominator;
  std::vector<double> gelu;
  std::vector<double> ln1;
  std::vector<double> ln2;
};

std::vector<double> toy_encoder_plain(const ToyEncoderConfig& cfg,
                                      const ToyWeights& w,
                                      const std::vector<double>& input,
                                      SiteTraces* traces = nullptr);

// Sets each site's E_m from its operands over plaintext runs on
// calibration inputs.
SiteConfigs calibrate_sites(
    const ToyEncoderConfig& cfg, const ToyWeights& w,
    const std::vector<std::vector<double>>& inputs,
    const rsqrt::RsqrtConfig& base,
    flood::Calibration policy = flood::Calibration::kCoverMax);

// Seeded standard-normal activations of shape seq_len x model_dim.
std::vector<double> toy_input(const ToyEncoderConfig& cfg, uint64_t seed);

struct PartyReport {
  transport::CommStats stats;
  RsqrtCounters rsqrt;
  uint64_t muls = 0;
};

struct SharedRun {
  std::vector<double> output;
  PartyReport client;
  PartyReport server;

  uint64_t online_bytes() const {
    return client.stats.bytes_sent + server.stats.bytes_sent;
  }
  uint64_t rounds() const {
    return std::max(client.stats.rounds, server.stats.rounds);
  }
};

// The client owns the input, the server owns the weights. Weights are
// split during setup, before counting starts.
SharedRun toy_encoder_shared(const ToyEncoderConfig& cfg, const ToyWeights& w,
                             const std::vector<double>& input,
                             const SiteConfigs& sites,
                             const SessionOptions& opts);

}  // namespace rsqrt2pc::bench
