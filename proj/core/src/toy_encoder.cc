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
#include "rsqrt2pc/toy_encoder.h"

#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "rsqrt2pc/errors.h"
#include "rsqrt2pc/flood.h"

namespace rsqrt2pc::bench {

using nonlinear::TensorShares;

void ToyEncoderConfig::validate() const {
  if (seq_len < 1 || model_dim < 2 || ffn_dim < 1 || heads < 1) {
    throw ConfigError("toy encoder dims must be >= 1 (model_dim >= 2)");
  }
  if (model_dim % heads != 0) {
    throw ConfigError("heads must divide model_dim");
  }
}

namespace {

struct Shapes {
  size_t d, f;
};

std::vector<double> gaussian(std::mt19937_64& rng, size_t n, double sd) {
  std::normal_distribution<double> g(0.0, sd);
  std::vector<double> v(n);
  for (auto& e : v) e = g(rng);
  return v;
}

std::vector<double> matmul_plain(const std::vector<double>& a,
                                 const std::vector<double>& b, size_t m,
                                 size_t k, size_t n) {
  std::vector<double> c(m * n, 0.0);
  for (size_t i = 0; i < m; ++i) {
    for (size_t t = 0; t < k; ++t) {
      const double av = a[i * k + t];
      for (size_t j = 0; j < n; ++j) c[i * n + j] += av * b[t * n + j];
    }
  }
  return c;
}

template <class T>
std::vector<T> columns(const std::vector<T>& m, size_t rows, size_t cols,
                       size_t from, size_t count) {
  std::vector<T> out(rows * count);
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < count; ++c) out[r * count + c] = m[r * cols + from + c];
  }
  return out;
}

template <class T>
std::vector<T> transpose(const std::vector<T>& m, size_t rows, size_t cols) {
  std::vector<T> out(rows * cols);
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) out[c * rows + r] = m[r * cols + c];
  }
  return out;
}

template <class T>
void put_columns(std::vector<T>& dst, const std::vector<T>& src, size_t rows,
                 size_t cols, size_t from, size_t count) {
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < count; ++c) dst[r * cols + from + c] = src[r * count + c];
  }
}

void check_size(const std::vector<double>& v, size_t n, const char* name) {
  if (v.size() != n) {
    throw UsageError(std::string("weight '") + name + "' has " +
                     std::to_string(v.size()) + " values, expected " +
                     std::to_string(n));
  }
}

}  // namespace

ToyWeights ToyWeights::random(const ToyEncoderConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.weight_seed);
  const size_t d = cfg.model_dim, f = cfg.ffn_dim;
  const double sd = 1.0 / std::sqrt(static_cast<double>(d));
  ToyWeights w;
  w.wq = gaussian(rng, d * d, sd);
  w.wk = gaussian(rng, d * d, sd);
  w.wv = gaussian(rng, d * d, sd);
  w.wo = gaussian(rng, d * d, sd);
  w.w1 = gaussian(rng, d * f, sd);
  w.w2 = gaussian(rng, f * d, 1.0 / std::sqrt(static_cast<double>(f)));
  w.ln1_gamma.assign(d, 1.0);
  w.ln1_beta.assign(d, 0.0);
  w.ln2_gamma.assign(d, 1.0);
  w.ln2_beta.assign(d, 0.0);
  return w;
}

ToyWeights ToyWeights::zeros(const ToyEncoderConfig& cfg) {
  cfg.validate();
  const size_t d = cfg.model_dim, f = cfg.ffn_dim;
  ToyWeights w;
  w.wq.assign(d * d, 0.0);
  w.wk.assign(d * d, 0.0);
  w.wv.assign(d * d, 0.0);
  w.wo.assign(d * d, 0.0);
  w.w1.assign(d * f, 0.0);
  w.w2.assign(f * d, 0.0);
  w.ln1_gamma.assign(d, 1.0);
  w.ln1_beta.assign(d, 0.0);
  w.ln2_gamma.assign(d, 1.0);
  w.ln2_beta.assign(d, 0.0);
  return w;
}

ToyWeights ToyWeights::load_csv(const std::string& path,
                                const ToyEncoderConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open weight file '" + path + "'");
  ToyWeights w;
  std::map<std::string, std::vector<double>*> slots = {
      {"wq", &w.wq}, {"wk", &w.wk}, {"wv", &w.wv}, {"wo", &w.wo},
      {"w1", &w.w1}, {"w2", &w.w2}, {"ln1_gamma", &w.ln1_gamma},
      {"ln1_beta", &w.ln1_beta}, {"ln2_gamma", &w.ln2_gamma},
      {"ln2_beta", &w.ln2_beta}};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string name, cell;
    std::getline(ss, name, ',');
    auto it = slots.find(name);
    if (it == slots.end()) {
      throw ConfigError("unknown weight '" + name + "' in " + path);
    }
    it->second->clear();
    while (std::getline(ss, cell, ',')) it->second->push_back(std::stod(cell));
  }
  w.check(cfg);
  return w;
}

ToyWeights ToyWeights::load(const ToyEncoderConfig& cfg) {
  return cfg.weight_file.empty() ? random(cfg) : load_csv(cfg.weight_file, cfg);
}

void ToyWeights::check(const ToyEncoderConfig& cfg) const {
  const size_t d = cfg.model_dim, f = cfg.ffn_dim;
  check_size(wq, d * d, "wq");
  check_size(wk, d * d, "wk");
  check_size(wv, d * d, "wv");
  check_size(wo, d * d, "wo");
  check_size(w1, d * f, "w1");
  check_size(w2, f * d, "w2");
  check_size(ln1_gamma, d, "ln1_gamma");
  check_size(ln1_beta, d, "ln1_beta");
  check_size(ln2_gamma, d, "ln2_gamma");
  check_size(ln2_beta, d, "ln2_beta");
}

SiteConfigs uniform_sites(const rsqrt::RsqrtConfig& base) {
  SiteConfigs s;
  s.softmax.relu = base;
  s.softmax.reciprocal = base;
  s.gelu = base;
  s.ln1.rsqrt = base;
  s.ln2.rsqrt = base;
  return s;
}

std::vector<double> toy_input(const ToyEncoderConfig& cfg, uint64_t seed) {
  std::mt19937_64 rng(seed);
  return gaussian(rng, cfg.seq_len * cfg.model_dim, 1.0);
}

std::vector<double> toy_encoder_plain(const ToyEncoderConfig& cfg,
                                      const ToyWeights& w,
                                      const std::vector<double>& input,
                                      SiteTraces* traces) {
  cfg.validate();
  w.check(cfg);
  const size_t n = cfg.seq_len, d = cfg.model_dim, f = cfg.ffn_dim;
  const size_t dh = d / cfg.heads;
  if (input.size() != n * d) throw UsageError("toy input has the wrong size");
  const double eps_soft = 0x1p-12, eps_ln = 1e-5;

  const auto q = matmul_plain(input, w.wq, n, d, d);
  const auto k = matmul_plain(input, w.wk, n, d, d);
  const auto v = matmul_plain(input, w.wv, n, d, d);
  std::vector<double> attn(n * d);
  for (size_t h = 0; h < cfg.heads; ++h) {
    const auto qh = columns(q, n, d, h * dh, dh);
    const auto kt = transpose(columns(k, n, d, h * dh, dh), n, dh);
    const auto vh = columns(v, n, d, h * dh, dh);
    auto scores = matmul_plain(qh, kt, n, dh, n);
    for (auto& e : scores) e /= std::sqrt(static_cast<double>(dh));
    std::vector<double> probs(n * n);
    for (size_t r = 0; r < n; ++r) {
      std::span<const double> row(scores.data() + r * n, n);
      double sum = 0.0;
      for (double e : row) {
        if (traces) traces->softmax_relu.push_back(e * e);
        sum += std::max(e, 0.0);
      }
      if (traces) traces->softmax_denominator.push_back(sum + eps_soft);
      const auto p = nonlinear::softmax_star_plain(row, eps_soft);
      std::copy(p.begin(), p.end(), probs.begin() + static_cast<std::ptrdiff_t>(r * n));
    }
    put_columns(attn, matmul_plain(probs, vh, n, n, dh), n, d, h * dh, dh);
  }
  auto res1 = matmul_plain(attn, w.wo, n, d, d);
  for (size_t i = 0; i < n * d; ++i) res1[i] += input[i];

  auto layernorm_rows = [&](const std::vector<double>& x,
                            const std::vector<double>& g,
                            const std::vector<double>& b,
                            std::vector<double>* trace) {
    std::vector<double> out(n * d);
    for (size_t r = 0; r < n; ++r) {
      std::span<const double> row(x.data() + r * d, d);
      if (trace) {
        double mean = 0.0, var = 0.0;
        for (double e : row) mean += e / d;
        for (double e : row) var += (e - mean) * (e - mean) / d;
        trace->push_back(var + eps_ln);
      }
      const auto y = nonlinear::layernorm_plain(row, g, b, eps_ln);
      std::copy(y.begin(), y.end(), out.begin() + static_cast<std::ptrdiff_t>(r * d));
    }
    return out;
  };

  const auto x1 = layernorm_rows(res1, w.ln1_gamma, w.ln1_beta,
                                 traces ? &traces->ln1 : nullptr);
  auto hidden = matmul_plain(x1, w.w1, n, d, f);
  const auto gp = nonlinear::SmuParams::gelu();
  for (auto& e : hidden) {
    if (traces) traces->gelu.push_back(e * e + gp.mu * gp.mu);
    e = nonlinear::smu_plain(e, gp);
  }
  auto res2 = matmul_plain(hidden, w.w2, n, f, d);
  for (size_t i = 0; i < n * d; ++i) res2[i] += x1[i];
  return layernorm_rows(res2, w.ln2_gamma, w.ln2_beta,
                        traces ? &traces->ln2 : nullptr);
}

SiteConfigs calibrate_sites(const ToyEncoderConfig& cfg, const ToyWeights& w,
                            const std::vector<std::vector<double>>& inputs,
                            const rsqrt::RsqrtConfig& base,
                            flood::Calibration policy) {
  SiteTraces traces;
  for (const auto& in : inputs) toy_encoder_plain(cfg, w, in, &traces);
  SiteConfigs s = uniform_sites(base);
  s.softmax.relu.flood.E_m =
      flood::calibrate_exponent(traces.softmax_relu, policy);
  s.softmax.reciprocal.flood.E_m =
      flood::calibrate_exponent(traces.softmax_denominator, policy);
  s.gelu.flood.E_m = flood::calibrate_exponent(traces.gelu, policy);
  s.ln1.rsqrt.flood.E_m = flood::calibrate_exponent(traces.ln1, policy);
  s.ln2.rsqrt.flood.E_m = flood::calibrate_exponent(traces.ln2, policy);
  return s;
}

namespace {

// Setup-time split of server-owned weights: both sides draw the client's
// half from a common setup stream, the server keeps the difference.
Shares setup_split(Session& s, std::mt19937_64& setup_rng,
                   const std::vector<double>& values) {
  const auto& codec = s.codec();
  Shares out(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    const uint64_t r = ring::random_element(setup_rng, codec);
    out[i] = s.is_server() ? codec.wrap(codec.encode(values[i]) - r) : r;
  }
  return out;
}

Shares add(Shares a, const Shares& b, const ring::FixedPointCodec& codec) {
  ring::add_inplace(a, b, codec);
  return a;
}

}  // namespace

SharedRun toy_encoder_shared(const ToyEncoderConfig& cfg, const ToyWeights& w,
                             const std::vector<double>& input,
                             const SiteConfigs& sites,
                             const SessionOptions& opts) {
  cfg.validate();
  w.check(cfg);
  const size_t n = cfg.seq_len, d = cfg.model_dim, f = cfg.ffn_dim;
  const size_t dh = d / cfg.heads;
  if (input.size() != n * d) throw UsageError("toy input has the wrong size");

  struct PartyOut {
    Shares y;
    PartyReport report;
  };

  auto party = [&](Session& s) {
    const auto& codec = s.codec();
    std::mt19937_64 setup_rng(opts.dealer_seed ^ 0x5e7u);
    const Shares wq = setup_split(s, setup_rng, w.wq);
    const Shares wk = setup_split(s, setup_rng, w.wk);
    const Shares wv = setup_split(s, setup_rng, w.wv);
    const Shares wo = setup_split(s, setup_rng, w.wo);
    const Shares w1 = setup_split(s, setup_rng, w.w1);
    const Shares w2 = setup_split(s, setup_rng, w.w2);

    const Shares x = s.share_input(ring::Party::kClient, input, n * d);
    const Shares q = s.matmul(x, wq, n, d, d);
    const Shares k = s.matmul(x, wk, n, d, d);
    const Shares v = s.matmul(x, wv, n, d, d);

    Shares attn(n * d);
    for (size_t h = 0; h < cfg.heads; ++h) {
      const Shares qh = columns(q, n, d, h * dh, dh);
      const Shares kt = transpose(columns(k, n, d, h * dh, dh), n, dh);
      const Shares vh = columns(v, n, d, h * dh, dh);
      Shares scores = s.matmul(qh, kt, n, dh, n);
      scores = ring::mul_public(s.party(), scores,
                                1.0 / std::sqrt(static_cast<double>(dh)), codec);
      const TensorShares probs = nonlinear::softmax_star_shared(
          s, TensorShares{{n, n}, std::move(scores)}, sites.softmax);
      put_columns(attn, s.matmul(probs.data, vh, n, n, dh), n, d, h * dh, dh);
    }
    const Shares res1 = add(s.matmul(attn, wo, n, d, d), x, codec);
    const TensorShares x1 = nonlinear::layernorm_shared(
        s, TensorShares{{n, d}, res1}, w.ln1_gamma, w.ln1_beta, sites.ln1);
    const Shares hidden = s.matmul(x1.data, w1, n, d, f);
    const TensorShares act = nonlinear::smu_shared(
        s, TensorShares{{n, f}, hidden}, nonlinear::SmuParams::gelu(),
        sites.gelu);
    const Shares res2 = add(s.matmul(act.data, w2, n, f, d), x1.data, codec);
    const TensorShares out = nonlinear::layernorm_shared(
        s, TensorShares{{n, d}, res2}, w.ln2_gamma, w.ln2_beta, sites.ln2);

    return PartyOut{out.data,
                    PartyReport{s.stats(), s.rsqrt_counters(), s.mul_elements()}};
  };

  auto res = run_two_party(opts, party);
  SharedRun run;
  run.output = reconstruct_all(res.client.y, res.server.y, opts.codec);
  run.client = res.client.report;
  run.server = res.server.report;
  return run;
}

}  // namespace rsqrt2pc::bench
