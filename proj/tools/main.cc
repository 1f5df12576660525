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
// rsqrt2pc: sweeps, communication reports and the toy encoder from the
// command line. Every subcommand reads an optional key=value file given by
// --config; --set key=value overrides single entries after the file.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rsqrt2pc/config.h"
#include "rsqrt2pc/errors.h"
#include "rsqrt2pc/report.h"
#include "rsqrt2pc/sweeps.h"
#include "rsqrt2pc/toy_encoder.h"

namespace {

using namespace rsqrt2pc;

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 1;

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  bool socket = false;
};

AppConfig load(const Common& c) {
  KeyValueConfig kv;
  if (!c.config_path.empty()) kv = KeyValueConfig::from_file(c.config_path);
  for (const auto& o : c.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("--set expects key=value, got '" + o + "'");
    }
    kv.set(o.substr(0, eq), o.substr(eq + 1));
  }
  return AppConfig::from(kv);
}

SessionOptions session_options(const AppConfig& app, const Common& c) {
  SessionOptions o;
  o.codec = app.codec;
  o.dealer_seed ^= app.seed;
  o.transport = c.socket ? TransportKind::kSocket : TransportKind::kInproc;
  return o;
}

void emit(const Common& c, const std::string& csv) {
  if (c.out_path.empty()) {
    std::cout << csv;
    return;
  }
  std::ofstream out(c.out_path);
  if (!out) throw UsageError("cannot write '" + c.out_path + "'");
  out << csv;
}

// Parses "a..b" or a single integer.
std::pair<int, int> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(s);
      return {v, v};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw UsageError("bad range '" + s + "', expected LO..HI");
  }
}

int rsqrt_sweep(const Common& c, double lo, double hi, int points,
                bool calibrate) {
  const AppConfig app = load(c);
  sweeps::RsqrtSweepConfig cfg;
  cfg.lo = lo;
  cfg.hi = hi;
  cfg.points = points;
  cfg.seed = app.seed;
  cfg.codec = app.codec;
  cfg.rsqrt = app.rsqrt();
  cfg.per_binade_exponent = calibrate;
  emit(c, sweeps::rsqrt_sweep_csv(sweeps::rsqrt_sweep(cfg)));
  return 0;
}

sweeps::ClosenessConfig closeness_from(const AppConfig& app,
                                       const std::string& gaps, int trials) {
  sweeps::ClosenessConfig cfg;
  std::tie(cfg.gap_lo, cfg.gap_hi) = parse_range(gaps);
  if (cfg.gap_lo < 0 || cfg.gap_hi < cfg.gap_lo) {
    throw UsageError("gap range must satisfy 0 <= LO <= HI");
  }
  cfg.trials = trials;
  cfg.iterations = app.newton.iterations;
  cfg.seed = app.seed;
  cfg.b = app.b;
  cfg.codec = app.codec;
  cfg.operands = flood::SamplerParams::rsqrt_operands(app.flood.E_m);
  return cfg;
}

int closeness(const Common& c, const std::string& gaps, int trials) {
  const AppConfig app = load(c);
  emit(c, sweeps::closeness_csv(
              sweeps::closeness_sweep(closeness_from(app, gaps, trials))));
  return 0;
}

int ablation(const Common& c, const std::string& gaps, int trials) {
  const AppConfig app = load(c);
  sweeps::AblationConfig cfg;
  cfg.closeness = closeness_from(app, gaps, trials);
  cfg.flood = app.flood;
  emit(c, sweeps::ablation_csv(sweeps::flood_ablation(cfg)));
  return 0;
}

int comm_report(const Common& c, const std::string& scenario, size_t rows,
                size_t width) {
  const AppConfig app = load(c);
  bench::ReportConfig cfg;
  cfg.codec = app.codec;
  cfg.rsqrt = app.rsqrt();
  cfg.seed = app.seed;
  cfg.rows = rows;
  cfg.width = width;
  cfg.toy = app.toy;
  emit(c, bench::report_csv(
              bench::comm_report(bench::parse_scenario(scenario), cfg)));
  return 0;
}

int toy_infer(const Common& c, uint64_t input_seed, bool calibrate) {
  const AppConfig app = load(c);
  const auto w = bench::ToyWeights::load(app.toy);
  bench::SiteConfigs sites = bench::uniform_sites(app.rsqrt());
  if (calibrate) {
    std::vector<std::vector<double>> inputs;
    for (uint64_t s = 100; s < 108; ++s) {
      inputs.push_back(bench::toy_input(app.toy, s));
    }
    sites = bench::calibrate_sites(app.toy, w, inputs, app.rsqrt());
  }
  const auto input = bench::toy_input(app.toy, input_seed);
  const auto plain = bench::toy_encoder_plain(app.toy, w, input);
  const auto run = bench::toy_encoder_shared(app.toy, w, input, sites,
                                             session_options(app, c));
  double worst = 0.0;
  for (size_t i = 0; i < plain.size(); ++i) {
    worst = std::max(worst, std::fabs(plain[i] - run.output[i]));
  }
  char buf[256];
  std::string csv = "index,plain,shared\n";
  for (size_t i = 0; i < plain.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.9g\n", i, plain[i],
                  run.output[i]);
    csv += buf;
  }
  emit(c, csv);
  std::fprintf(stderr,
               "max_abs_diff=%.6g online_bytes=%llu rounds=%llu "
               "rsqrt_calls=%llu\n",
               worst, static_cast<unsigned long long>(run.online_bytes()),
               static_cast<unsigned long long>(run.rounds()),
               static_cast<unsigned long long>(run.client.rsqrt.invocations));
  return 0;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "key=value settings file");
  sub->add_option("--set", c.overrides, "override one setting, key=value")
      ->take_all();
  sub->add_option("--out", c.out_path, "write CSV here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-party inverse square root experiments"};
  app.require_subcommand(1);

  Common common;
  double lo = 0x1p-6, hi = 0x1p6;
  int points = 49;
  std::string gaps = "0..12";
  int trials = 200;
  std::string scenario = "rsqrt";
  size_t rows = 8, width = 16;
  uint64_t input_seed = 1;
  bool calibrate = false;

  auto* rs = app.add_subcommand("rsqrt-sweep", "shared rsqrt over a log grid");
  add_common(rs, common);
  rs->add_option("--lo", lo, "smallest operand");
  rs->add_option("--hi", hi, "largest operand");
  rs->add_option("--points", points, "grid points")->check(CLI::PositiveNumber);
  rs->add_flag("--calibrate", calibrate,
               "calibrate the expected exponent per binade");

  auto* cs = app.add_subcommand("closeness-sweep",
                                "convergence rate versus share exponent gap");
  add_common(cs, common);
  cs->add_option("--gaps", gaps, "gap range LO..HI");
  cs->add_option("--trials", trials, "trials per gap")->check(CLI::PositiveNumber);

  auto* fa = app.add_subcommand("flood-ablation",
                                "closeness with and without flooding");
  add_common(fa, common);
  fa->add_option("--gaps", gaps, "gap range LO..HI");
  fa->add_option("--trials", trials, "trials per gap")->check(CLI::PositiveNumber);

  auto* cr = app.add_subcommand("comm-report",
                                "counted bytes and rounds against baselines");
  add_common(cr, common);
  cr->add_option("--scenario", scenario,
                 "rsqrt, layernorm, activation, softmax or end2end");
  cr->add_option("--rows", rows, "rows for single-layer scenarios");
  cr->add_option("--width", width, "row width for single-layer scenarios");

  auto* ti = app.add_subcommand("toy-infer", "one shared encoder block");
  add_common(ti, common);
  ti->add_option("--input-seed", input_seed, "seed of the activations");
  ti->add_flag("--calibrate", calibrate,
               "set per-site exponents from plaintext runs");
  ti->add_flag("--socket", common.socket, "run the parties over loopback TCP");

  CLI11_PARSE(app, argc, argv);

  try {
    if (rs->parsed()) return rsqrt_sweep(common, lo, hi, points, calibrate);
    if (cs->parsed()) return closeness(common, gaps, trials);
    if (fa->parsed()) return ablation(common, gaps, trials);
    if (cr->parsed()) return comm_report(common, scenario, rows, width);
    if (ti->parsed()) return toy_infer(common, input_seed, calibrate);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
