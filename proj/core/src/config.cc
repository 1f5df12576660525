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
#include "rsqrt2pc/config.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "rsqrt2pc/errors.h"

namespace rsqrt2pc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "ring_bits",      "frac_bits",        "flood_constant", "mask_spread",
      "expected_exponent", "flooded",       "b",              "iterations",
      "strategy",       "mask_shift",       "sampler_family", "sampler_location",
      "sampler_scale",  "seed",             "seq_len",        "model_dim",
      "ffn_dim",        "heads",            "weight_file",    "host",
      "port"};
  return keys;
}

}  // namespace

KeyValueConfig KeyValueConfig::from_string(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    }
    cfg.values_[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

const std::string& KeyValueConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

std::vector<std::string> KeyValueConfig::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

double KeyValueConfig::get_double(const std::string& key,
                                  double fallback) const {
  if (!has(key)) return fallback;
  try {
    size_t pos = 0;
    const double v = std::stod(get(key), &pos);
    if (pos != get(key).size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("'" + key + "' is not a number: " + get(key));
  }
}

int64_t KeyValueConfig::get_int(const std::string& key,
                                int64_t fallback) const {
  if (!has(key)) return fallback;
  try {
    size_t pos = 0;
    const long long v = std::stoll(get(key), &pos, 0);
    if (pos != get(key).size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("'" + key + "' is not an integer: " + get(key));
  }
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  std::string v = get(key);
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("'" + key + "' is not a boolean: " + get(key));
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
  return has(key) ? get(key) : fallback;
}

AppConfig AppConfig::from(const KeyValueConfig& kv) {
  for (const auto& k : kv.keys()) {
    if (!known_keys().count(k)) throw ConfigError("unknown config key '" + k + "'");
  }
  AppConfig c;
  c.codec = ring::FixedPointCodec(static_cast<int>(kv.get_int("ring_bits", 64)),
                                  static_cast<int>(kv.get_int("frac_bits", 16)));
  c.flood.F = kv.get_double("flood_constant", c.flood.F);
  c.flood.mask_spread = kv.get_double("mask_spread", c.flood.mask_spread);
  c.flood.E_m = static_cast<int>(kv.get_int("expected_exponent", c.flood.E_m));
  c.flood.validate();
  c.flooded = kv.get_bool("flooded", c.flooded);
  c.b = kv.get_double("b", c.b);
  c.newton.iterations = static_cast<int>(kv.get_int("iterations", 4));
  c.newton.strategy =
      rsqrt::parse_strategy(kv.get_string("strategy", "masked-open"));
  c.newton.mask_shift = static_cast<int>(kv.get_int("mask_shift", 8));
  c.newton.validate();
  if (c.newton.mask_shift > c.codec.frac_bits()) {
    throw ConfigError("mask_shift may not exceed frac_bits");
  }
  c.sampler.family = flood::parse_family(kv.get_string("sampler_family", "gaussian"));
  c.sampler.location = kv.get_double("sampler_location", c.sampler.location);
  c.sampler.scale = kv.get_double("sampler_scale", c.sampler.scale);
  c.sampler.validate();
  c.seed = static_cast<uint64_t>(kv.get_int("seed", 1));
  c.toy.seq_len = static_cast<size_t>(kv.get_int("seq_len", 8));
  c.toy.model_dim = static_cast<size_t>(kv.get_int("model_dim", 16));
  c.toy.ffn_dim = static_cast<size_t>(kv.get_int("ffn_dim", 32));
  c.toy.heads = static_cast<size_t>(kv.get_int("heads", 1));
  c.toy.weight_file = kv.get_string("weight_file", "");
  c.toy.validate();
  c.host = kv.get_string("host", c.host);
  const int64_t port = kv.get_int("port", 0);
  if (port < 0 || port > 65535) throw ConfigError("port out of range");
  c.port = static_cast<uint16_t>(port);
  return c;
}

rsqrt::RsqrtConfig AppConfig::rsqrt() const {
  rsqrt::RsqrtConfig r;
  r.flood = flood;
  r.flooded = flooded;
  r.b = b;
  r.newton = newton;
  return r;
}

}  // namespace rsqrt2pc
