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
#include "rsqrt2pc/session.h"

#include <string>

namespace rsqrt2pc {

Session::Session(ring::Party party, ring::FixedPointCodec codec,
                 transport::Channel& channel, uint64_t dealer_seed,
                 uint64_t local_seed)
    : party_(party),
      codec_(codec),
      channel_(channel),
      dealer_(dealer_seed, party, codec),
      rng_(local_seed) {}

Shares Session::exchange(std::span<const uint64_t> mine) {
  send(mine);
  return recv(mine.size());
}

Shares Session::open(std::span<const uint64_t> shares) {
  Shares theirs = exchange(shares);
  for (size_t i = 0; i < theirs.size(); ++i) {
    theirs[i] = codec_.wrap(theirs[i] + shares[i]);
  }
  return theirs;
}

std::vector<double> Session::open_values(std::span<const uint64_t> shares) {
  const Shares raw = open(shares);
  std::vector<double> out(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) out[i] = codec_.decode(raw[i]);
  return out;
}

void Session::send(std::span<const uint64_t> values) {
  transport::send_elements(channel_, values, codec_);
}

Shares Session::recv(size_t n) {
  return transport::recv_elements(channel_, n, codec_);
}

void Session::consume_triples(uint64_t first_id, size_t n) {
  if (first_id < next_unused_triple_) {
    throw ProtocolError("triple " + std::to_string(first_id) +
                        " was already consumed");
  }
  next_unused_triple_ = first_id + n;
}

Shares Session::mul(std::span<const uint64_t> x, std::span<const uint64_t> y) {
  mul_elements_ += x.size();
  mul_calls_ += 1;
  return beaver_mul(*this, x, y, dealer_.triples(x.size()));
}

Shares Session::mul_rescaled(std::span<const uint64_t> x,
                             std::span<const uint64_t> y, int bits) {
  mul_elements_ += x.size();
  mul_calls_ += 1;
  const Shares raw = beaver_mul(*this, x, y, dealer_.triples(x.size()), false);
  return ring::truncate_local(party_, raw, bits, codec_);
}

Shares Session::matmul(std::span<const uint64_t> x,
                       std::span<const uint64_t> y, size_t m, size_t k,
                       size_t n) {
  mul_calls_ += 1;
  return beaver_matmul(*this, x, y, dealer_.matrix_triple(m, k, n));
}

Shares Session::share_input(ring::Party owner, std::span<const double> values,
                            size_t n) {
  if (party_ == owner) {
    if (values.size() != n) throw UsageError("share_input: size mismatch");
    Shares mine(n), theirs(n);
    for (size_t i = 0; i < n; ++i) {
      const uint64_t r = ring::random_element(rng_, codec_);
      mine[i] = codec_.wrap(codec_.encode(values[i]) - r);
      theirs[i] = r;
    }
    send(theirs);
    return mine;
  }
  return recv(n);
}

Shares beaver_mul(Session& s, std::span<const uint64_t> x,
                  std::span<const uint64_t> y, const TripleBatch& t,
                  bool rescale) {
  const size_t n = x.size();
  if (y.size() != n || t.size() != n) {
    throw UsageError("beaver_mul: operand/triple length mismatch");
  }
  s.consume_triples(t.first_id, n);
  const auto& codec = s.codec();
  Shares masked(2 * n);
  for (size_t i = 0; i < n; ++i) {
    masked[i] = codec.wrap(x[i] - t.a[i]);
    masked[n + i] = codec.wrap(y[i] - t.b[i]);
  }
  const Shares opened = s.open(masked);
  Shares z(n);
  for (size_t i = 0; i < n; ++i) {
    const uint64_t d = opened[i];
    const uint64_t e = opened[n + i];
    uint64_t v = t.c[i] + d * t.b[i] + e * t.a[i];
    if (s.is_server()) v += d * e;
    z[i] = codec.wrap(v);
  }
  if (rescale) z = ring::truncate_local(s.party(), z, codec.frac_bits(), codec);
  return z;
}

Shares beaver_matmul(Session& s, std::span<const uint64_t> x,
                     std::span<const uint64_t> y, const MatrixTriple& t,
                     bool rescale) {
  const size_t m = t.m, k = t.k, n = t.n;
  if (x.size() != m * k || y.size() != k * n) {
    throw UsageError("beaver_matmul: operand/triple shape mismatch");
  }
  s.consume_triples(t.id, 1);
  const auto& codec = s.codec();
  Shares masked(m * k + k * n);
  for (size_t i = 0; i < m * k; ++i) masked[i] = codec.wrap(x[i] - t.a[i]);
  for (size_t i = 0; i < k * n; ++i) {
    masked[m * k + i] = codec.wrap(y[i] - t.b[i]);
  }
  const Shares opened = s.open(masked);
  const uint64_t* d = opened.data();
  const uint64_t* e = opened.data() + m * k;
  Shares z(t.c);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) {
      uint64_t acc = 0;
      for (size_t q = 0; q < k; ++q) {
        acc += d[i * k + q] * t.b[q * n + j] + t.a[i * k + q] * e[q * n + j];
        if (s.is_server()) acc += d[i * k + q] * e[q * n + j];
      }
      z[i * n + j] = codec.wrap(z[i * n + j] + acc);
    }
  }
  if (rescale) z = ring::truncate_local(s.party(), z, codec.frac_bits(), codec);
  return z;
}

std::pair<std::unique_ptr<transport::Channel>,
          std::unique_ptr<transport::Channel>>
open_channels(TransportKind kind) {
  if (kind == TransportKind::kInproc) return transport::open_inproc();
  auto [a, b] = transport::open_socket_pair();
  return {std::move(a), std::move(b)};
}

std::vector<double> reconstruct_all(std::span<const uint64_t> client,
                                    std::span<const uint64_t> server,
                                    const ring::FixedPointCodec& codec) {
  if (client.size() != server.size()) {
    throw UsageError("reconstruct_all: length mismatch");
  }
  std::vector<double> out(client.size());
  for (size_t i = 0; i < client.size(); ++i) {
    out[i] = codec.decode(client[i] + server[i]);
  }
  return out;
}

}  // namespace rsqrt2pc
