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
#include "rsqrt2pc/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "rsqrt2pc/errors.h"
#include "rsqrt2pc/flood.h"
#include "rsqrt2pc/nonlinear.h"

namespace rsqrt2pc::bench {

Scenario parse_scenario(const std::string& name) {
  if (name == "rsqrt") return Scenario::kRsqrt;
  if (name == "layernorm") return Scenario::kLayerNorm;
  if (name == "activation") return Scenario::kActivation;
  if (name == "softmax") return Scenario::kSoftmax;
  if (name == "end2end") return Scenario::kEnd2End;
  throw ConfigError("unknown scenario '" + name + "'");
}

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::kRsqrt: return "rsqrt";
    case Scenario::kLayerNorm: return "layernorm";
    case Scenario::kActivation: return "activation";
    case Scenario::kSoftmax: return "softmax";
    case Scenario::kEnd2End: return "end2end";
  }
  return "?";
}

double mul_wire_bytes(const ring::FixedPointCodec& codec) {
  return 2.0 * 2.0 * static_cast<double>(codec.element_bytes());
}

namespace {

struct PartyTotals {
  transport::CommStats stats;
  RsqrtCounters rsqrt;
  uint64_t muls = 0;
};

Measured combine(const PartyTotals& c, const PartyTotals& s) {
  Measured m;
  m.online_bytes = c.stats.bytes_sent + s.stats.bytes_sent;
  m.rounds = std::max(c.stats.rounds, s.stats.rounds);
  m.muls = c.muls;
  m.rsqrt_invocations = c.rsqrt.invocations;
  m.rsqrt_elements = c.rsqrt.elements;
  m.rsqrt_bytes = c.rsqrt.stats.bytes_sent + s.rsqrt.stats.bytes_sent;
  m.rsqrt_rounds = std::max(c.rsqrt.stats.rounds, s.rsqrt.stats.rounds);
  m.rsqrt_muls = c.rsqrt.muls;
  m.seed_bytes = c.rsqrt.seed_stats.bytes_sent + s.rsqrt.seed_stats.bytes_sent;
  m.seed_rounds =
      std::max(c.rsqrt.seed_stats.rounds, s.rsqrt.seed_stats.rounds);
  return m;
}

std::vector<double> sample_values(Scenario sc, const ReportConfig& cfg,
                                  size_t n) {
  flood::SamplerParams p;
  if (sc == Scenario::kRsqrt) {
    p = flood::SamplerParams::rsqrt_operands(cfg.rsqrt.flood.E_m);
  }
  flood::ActivationSampler sampler(p, cfg.seed);
  return sampler.sample(n);
}

}  // namespace

Measured measure_scenario(Scenario sc, const ReportConfig& cfg) {
  if (sc == Scenario::kEnd2End) {
    const ToyWeights w = ToyWeights::load(cfg.toy);
    const auto input = toy_input(cfg.toy, cfg.seed);
    SessionOptions opts;
    opts.codec = cfg.codec;
    opts.dealer_seed = cfg.seed;
    const SharedRun run =
        toy_encoder_shared(cfg.toy, w, input, uniform_sites(cfg.rsqrt), opts);
    return combine({run.client.stats, run.client.rsqrt, run.client.muls},
                   {run.server.stats, run.server.rsqrt, run.server.muls});
  }
  if (cfg.rows < 1 || cfg.width < 2) {
    throw ConfigError("report needs rows >= 1 and width >= 2");
  }
  const size_t n = cfg.rows * cfg.width;
  const auto values = sample_values(sc, cfg, n);
  std::mt19937_64 rng(cfg.seed);
  std::vector<uint64_t> client(n), server(n);
  for (size_t i = 0; i < n; ++i) {
    const auto [c, s] = ring::make_shares(values[i], cfg.codec, rng);
    client[i] = c.value;
    server[i] = s.value;
  }
  SessionOptions opts;
  opts.codec = cfg.codec;
  opts.dealer_seed = cfg.seed;
  const std::vector<double> gamma(cfg.width, 1.0), beta(cfg.width, 0.0);
  auto res = run_two_party(opts, [&](Session& s) {
    const Shares& mine = s.is_server() ? server : client;
    const nonlinear::TensorShares t{{cfg.rows, cfg.width}, mine};
    switch (sc) {
      case Scenario::kRsqrt:
        rsqrt::rsqrt_shared(s, mine, cfg.rsqrt);
        break;
      case Scenario::kLayerNorm:
        nonlinear::layernorm_shared(s, t, gamma, beta,
                                    nonlinear::LayerNormConfig{cfg.rsqrt, 1e-5});
        break;
      case Scenario::kActivation:
        nonlinear::smu_shared(s, t, nonlinear::SmuParams::gelu(), cfg.rsqrt);
        break;
      case Scenario::kSoftmax:
        nonlinear::softmax_star_shared(
            s, t, nonlinear::SoftmaxStarConfig{cfg.rsqrt, cfg.rsqrt, 0x1p-12});
        break;
      case Scenario::kEnd2End:
        break;
    }
    return PartyTotals{s.stats(), s.rsqrt_counters(), s.mul_elements()};
  });
  return combine(res.client, res.server);
}

std::vector<ReportRow> comm_report(Scenario sc, const ReportConfig& cfg) {
  const Measured m = measure_scenario(sc, cfg);
  const double mul_bytes = mul_wire_bytes(cfg.codec);
  const double calls = static_cast<double>(m.rsqrt_elements);
  const double rest_bytes = double(m.online_bytes) - double(m.rsqrt_bytes);
  const uint64_t rest_rounds = m.rounds - std::min(m.rounds, m.rsqrt_rounds);
  const uint64_t rest_muls = m.muls - m.rsqrt_muls;

  std::vector<ReportRow> rows;
  rows.push_back({"ours", "counted", double(m.online_bytes), m.rounds, m.muls});
  rows.push_back(
      {"ours-seed", "counted", double(m.seed_bytes), m.seed_rounds, 0});
  rows.push_back({"ours-rsqrt", "counted", double(m.rsqrt_bytes),
                  m.rsqrt_rounds, m.rsqrt_muls});

  // Baseline rsqrt cost per invocation: seed muls and rounds plus Newton.
  auto modeled = [&](const std::string& name, double seed_bytes_per_call,
                     uint64_t seed_muls, uint64_t seed_rounds, int iters) {
    const uint64_t newton_muls =
        static_cast<uint64_t>(iters) * kMulsPerNewtonStep;
    const double bytes = rest_bytes +
                         calls * (seed_bytes_per_call +
                                  (seed_muls + newton_muls) * mul_bytes);
    const uint64_t rounds =
        rest_rounds + m.rsqrt_invocations * (seed_rounds + newton_muls);
    const uint64_t muls =
        rest_muls + m.rsqrt_elements * (seed_muls + newton_muls);
    rows.push_back({name, "modeled", bytes, rounds, muls});
  };

  const int cm = crypten_seed_muls();
  modeled("crypten", 0.0, static_cast<uint64_t>(cm), static_cast<uint64_t>(cm),
          kIterationsCrypten);
  modeled("taylor-7", 0.0, static_cast<uint64_t>(taylor_seed_muls(7)),
          static_cast<uint64_t>(taylor_seed_muls(7)), kIterationsTaylorHigh);
  modeled("taylor-2", 0.0, static_cast<uint64_t>(taylor_seed_muls(2)),
          static_cast<uint64_t>(taylor_seed_muls(2)), kIterationsTaylorLow);
  for (int sigma : cfg.lut_sigmas) {
    for (double entries : cfg.lut_entries) {
      if (entries > std::ldexp(1.0, sigma)) continue;
      LutCostModel lut{sigma, entries, cfg.codec.ring_bits()};
      const double bytes = lut_cost(lut, 1).online_bits / 8.0;
      char name[64];
      std::snprintf(name, sizeof(name), "lut-s%d-m%.0f", sigma, entries);
      modeled(name, bytes, 0, 1, kIterationsLut);
    }
  }
  return rows;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  os << "method,kind,online_bytes,rounds,muls\n";
  for (const auto& r : rows) {
    char bytes[64];
    std::snprintf(bytes, sizeof(bytes), "%.1f", r.online_bytes);
    os << r.method << ',' << r.kind << ',' << bytes << ',' << r.rounds << ','
       << r.muls << '\n';
  }
  return os.str();
}

}  // namespace rsqrt2pc::bench
