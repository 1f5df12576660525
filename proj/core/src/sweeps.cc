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
#include "rsqrt2pc/sweeps.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "rsqrt2pc/errors.h"
#include "rsqrt2pc/session.h"

namespace rsqrt2pc::sweeps {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

struct SplitBatch {
  std::vector<double> x;
  std::vector<uint64_t> client;
  std::vector<uint64_t> server;
};

SplitBatch make_splits(const ClosenessConfig& cfg, int gap) {
  std::mt19937_64 rng(cfg.seed * 1000003ULL + static_cast<uint64_t>(gap));
  flood::ActivationSampler sampler(cfg.operands, rng());
  SplitBatch out;
  while (static_cast<int>(out.x.size()) < cfg.trials) {
    const double x = sampler.sample();
    if (!(x > 0.0)) continue;
    const auto [c, s] = flood::adversarial_split(x, gap, cfg.codec, rng);
    out.x.push_back(x);
    out.client.push_back(c.value);
    out.server.push_back(s.value);
  }
  return out;
}

rsqrt::RsqrtConfig unflooded_config(const ClosenessConfig& cfg) {
  rsqrt::RsqrtConfig rc;
  rc.flooded = false;
  rc.b = cfg.b;
  rc.newton.iterations = cfg.iterations;
  return rc;
}

double rel_err(double got, double x) {
  const double want = 1.0 / std::sqrt(x);
  return std::fabs(got - want) / want;
}

}  // namespace

std::vector<double> run_rsqrt_on_shares(const std::vector<uint64_t>& client,
                                        const std::vector<uint64_t>& server,
                                        const ring::FixedPointCodec& codec,
                                        const rsqrt::RsqrtConfig& cfg,
                                        uint64_t seed) {
  SessionOptions opts;
  opts.codec = codec;
  opts.dealer_seed = seed ^ 0xdea1e5ULL;
  opts.client_seed = seed * 2 + 1;
  opts.server_seed = seed * 2 + 2;
  auto res = run_two_party(opts, [&](Session& s) {
    return rsqrt::rsqrt_shared(s, s.is_server() ? server : client, cfg);
  });
  return reconstruct_all(res.client, res.server, codec);
}

std::vector<ClosenessRow> closeness_sweep(const ClosenessConfig& cfg) {
  if (cfg.trials < 1 || cfg.gap_lo < 0 || cfg.gap_hi < cfg.gap_lo) {
    throw ConfigError("closeness sweep needs trials >= 1 and 0 <= lo <= hi");
  }
  const rsqrt::RsqrtConfig rc = unflooded_config(cfg);
  std::vector<ClosenessRow> rows;
  for (int gap = cfg.gap_lo; gap <= cfg.gap_hi; ++gap) {
    const SplitBatch batch = make_splits(cfg, gap);
    const auto y = run_rsqrt_on_shares(batch.client, batch.server, cfg.codec,
                                       rc, cfg.seed + static_cast<uint64_t>(gap));
    ClosenessRow row{gap, cfg.trials, 0, 0.0};
    for (size_t i = 0; i < y.size(); ++i) {
      const double e = rel_err(y[i], batch.x[i]);
      row.mean_rel_err += e / cfg.trials;
      if (e <= cfg.tolerance) row.converged++;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string closeness_csv(const std::vector<ClosenessRow>& rows) {
  std::ostringstream os;
  os << "gap,trials,converged,mean_rel_err\n";
  for (const auto& r : rows) {
    os << r.gap << ',' << r.trials << ',' << r.converged << ','
       << fmt_double(r.mean_rel_err) << '\n';
  }
  return os.str();
}

std::vector<AblationRow> flood_ablation(const AblationConfig& cfg) {
  const ClosenessConfig& cc = cfg.closeness;
  if (cc.trials < 1 || cc.gap_lo < 0 || cc.gap_hi < cc.gap_lo) {
    throw ConfigError("ablation needs trials >= 1 and 0 <= lo <= hi");
  }
  const rsqrt::RsqrtConfig plain = unflooded_config(cc);
  rsqrt::RsqrtConfig flooded = plain;
  flooded.flooded = true;
  flooded.reshare_flood = true;
  flooded.flood = cfg.flood;

  std::vector<AblationRow> rows;
  for (int gap = cc.gap_lo; gap <= cc.gap_hi; ++gap) {
    const SplitBatch batch = make_splits(cc, gap);
    const uint64_t seed = cc.seed + static_cast<uint64_t>(gap);
    const auto yp =
        run_rsqrt_on_shares(batch.client, batch.server, cc.codec, plain, seed);
    const auto yf = run_rsqrt_on_shares(batch.client, batch.server, cc.codec,
                                        flooded, seed);
    AblationRow row{gap, cc.trials, 0, 0};
    for (size_t i = 0; i < batch.x.size(); ++i) {
      if (rel_err(yf[i], batch.x[i]) <= cc.tolerance) row.converged_flooded++;
      if (rel_err(yp[i], batch.x[i]) <= cc.tolerance) row.converged_plain++;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  os << "gap,trials,converged_flooded,converged_plain,rate_flooded,rate_plain\n";
  for (const auto& r : rows) {
    os << r.gap << ',' << r.trials << ',' << r.converged_flooded << ','
       << r.converged_plain << ','
       << fmt_double(double(r.converged_flooded) / r.trials) << ','
       << fmt_double(double(r.converged_plain) / r.trials) << '\n';
  }
  return os.str();
}

std::vector<RsqrtSweepRow> rsqrt_sweep(const RsqrtSweepConfig& cfg) {
  if (!(cfg.lo > 0.0) || !(cfg.hi >= cfg.lo) || cfg.points < 1) {
    throw ConfigError("rsqrt sweep needs 0 < lo <= hi and points >= 1");
  }
  std::vector<double> xs(static_cast<size_t>(cfg.points));
  for (int k = 0; k < cfg.points; ++k) {
    const double t = cfg.points == 1 ? 0.0 : double(k) / (cfg.points - 1);
    xs[static_cast<size_t>(k)] =
        std::exp(std::log(cfg.lo) + t * (std::log(cfg.hi) - std::log(cfg.lo)));
  }
  std::mt19937_64 rng(cfg.seed);
  std::vector<uint64_t> client(xs.size()), server(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    const auto [c, s] = ring::make_shares(xs[i], cfg.codec, rng);
    client[i] = c.value;
    server[i] = s.value;
  }
  std::vector<double> y;
  if (cfg.per_binade_exponent && cfg.rsqrt.flooded) {
    y.resize(xs.size());
    size_t i = 0;
    while (i < xs.size()) {
      size_t j = i;
      while (j < xs.size() && std::ilogb(xs[j]) == std::ilogb(xs[i])) ++j;
      rsqrt::RsqrtConfig rc = cfg.rsqrt;
      rc.flood.E_m = flood::calibrate_exponent(
          {xs.begin() + long(i), xs.begin() + long(j)},
          flood::Calibration::kCoverMax);
      const auto part = run_rsqrt_on_shares(
          {client.begin() + long(i), client.begin() + long(j)},
          {server.begin() + long(i), server.begin() + long(j)}, cfg.codec, rc,
          cfg.seed + i);
      std::copy(part.begin(), part.end(), y.begin() + long(i));
      i = j;
    }
  } else {
    y = run_rsqrt_on_shares(client, server, cfg.codec, cfg.rsqrt, cfg.seed);
  }
  const rsqrt::SeedParams params = cfg.rsqrt.seed();
  std::vector<RsqrtSweepRow> rows;
  for (size_t i = 0; i < xs.size(); ++i) {
    rows.push_back({xs[i],
                    rsqrt::seed_local(static_cast<float>(xs[i]), params), y[i],
                    rel_err(y[i], xs[i])});
  }
  return rows;
}

std::string rsqrt_sweep_csv(const std::vector<RsqrtSweepRow>& rows) {
  std::ostringstream os;
  os << "x,seed_local,shared,rel_err\n";
  for (const auto& r : rows) {
    os << fmt_double(r.x) << ',' << fmt_double(r.seed_local) << ','
       << fmt_double(r.shared) << ',' << fmt_double(r.rel_err) << '\n';
  }
  return os.str();
}

}  // namespace rsqrt2pc::sweeps
