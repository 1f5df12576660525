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
#include <exception>
#include <memory>
#include <random>
#include <span>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "rsqrt2pc/dealer.h"
#include "rsqrt2pc/errors.h"
#include "rsqrt2pc/ring.h"
#include "rsqrt2pc/transport.h"

namespace rsqrt2pc {

using Shares = std::vector<uint64_t>;

// Traffic attributed to inverse-square-root evaluations on one party.
struct RsqrtCounters {
  uint64_t invocations = 0;
  uint64_t elements = 0;
  uint64_t muls = 0;
  transport::CommStats stats;
  // Traffic during the local seed step alone.
  transport::CommStats seed_stats;
};

// One party's view of a two-party computation: codec, channel, dealer and
// a private randomness source. Single-threaded; both parties must issue
// the same sequence of protocol calls.
class Session {
 public:
  Session(ring::Party party, ring::FixedPointCodec codec,
          transport::Channel& channel, uint64_t dealer_seed,
          uint64_t local_seed);

  ring::Party party() const { return party_; }
  bool is_server() const { return party_ == ring::Party::kServer; }
  const ring::FixedPointCodec& codec() const { return codec_; }
  transport::Channel& channel() { return channel_; }
  Dealer& dealer() { return dealer_; }
  std::mt19937_64& rng() { return rng_; }
  transport::CommStats stats() const { return channel_.stats(); }

  // Sends our elements and receives the same number back, one round.
  Shares exchange(std::span<const uint64_t> mine);
  // Raw ring values of the jointly opened shares.
  Shares open(std::span<const uint64_t> shares);
  std::vector<double> open_values(std::span<const uint64_t> shares);

  void send(std::span<const uint64_t> values);
  Shares recv(size_t n);

  // Beaver products rescaled to 2^f; fresh triples from the dealer.
  Shares mul(std::span<const uint64_t> x, std::span<const uint64_t> y);
  // Beaver product truncated by the given number of bits instead of f.
  Shares mul_rescaled(std::span<const uint64_t> x, std::span<const uint64_t> y,
                      int bits);
  // Row-major (m x k) times (k x n), rescaled.
  Shares matmul(std::span<const uint64_t> x, std::span<const uint64_t> y,
                size_t m, size_t k, size_t n);

  // The owner's plaintext becomes shares; the peer receives its half.
  Shares share_input(ring::Party owner, std::span<const double> values,
                     size_t n);

  // Marks triple ids as consumed; throws ProtocolError on reuse.
  void consume_triples(uint64_t first_id, size_t n);

  uint64_t mul_elements() const { return mul_elements_; }
  uint64_t mul_calls() const { return mul_calls_; }
  RsqrtCounters& rsqrt_counters() { return rsqrt_counters_; }
  const RsqrtCounters& rsqrt_counters() const { return rsqrt_counters_; }

 private:
  ring::Party party_;
  ring::FixedPointCodec codec_;
  transport::Channel& channel_;
  Dealer dealer_;
  std::mt19937_64 rng_;
  uint64_t next_unused_triple_ = 0;
  uint64_t mul_elements_ = 0;
  uint64_t mul_calls_ = 0;
  RsqrtCounters rsqrt_counters_;
};

// x*y on shares with the given triples: one round, two elements sent per
// product, followed by local truncation when rescale is set.
Shares beaver_mul(Session& s, std::span<const uint64_t> x,
                  std::span<const uint64_t> y, const TripleBatch& t,
                  bool rescale = true);
Shares beaver_matmul(Session& s, std::span<const uint64_t> x,
                     std::span<const uint64_t> y, const MatrixTriple& t,
                     bool rescale = true);

enum class TransportKind { kInproc, kSocket };

struct SessionOptions {
  ring::FixedPointCodec codec;
  uint64_t dealer_seed = 0x5eed0001;
  uint64_t client_seed = 0x5eed0002;
  uint64_t server_seed = 0x5eed0003;
  TransportKind transport = TransportKind::kInproc;
  bool record_transcript = false;
};

template <class R>
struct TwoPartyResult {
  R client;
  R server;
  transport::CommStats client_stats;
  transport::CommStats server_stats;
  std::vector<uint8_t> client_transcript;
  std::vector<uint8_t> server_transcript;

  uint64_t rounds() const {
    return std::max(client_stats.rounds, server_stats.rounds);
  }
};

std::pair<std::unique_ptr<transport::Channel>,
          std::unique_ptr<transport::Channel>>
open_channels(TransportKind kind);

// Runs fn(Session&) for both parties on two threads over a fresh channel
// pair. If either side throws, both channels are closed so the other side
// cannot block, and the first non-transport error is rethrown.
template <class Fn>
auto run_two_party(const SessionOptions& opts, Fn&& fn)
    -> TwoPartyResult<std::invoke_result_t<Fn&, Session&>> {
  using R = std::invoke_result_t<Fn&, Session&>;
  static_assert(!std::is_void_v<R>, "party function must return a value");
  auto [cc, sc] = open_channels(opts.transport);
  cc->record_transcript(opts.record_transcript);
  sc->record_transcript(opts.record_transcript);

  TwoPartyResult<R> out;
  std::exception_ptr errs[2];
  auto body = [&](int idx, ring::Party party, transport::Channel& ch,
                  uint64_t seed, R& slot) {
    try {
      Session session(party, opts.codec, ch, opts.dealer_seed, seed);
      slot = fn(session);
    } catch (...) {
      errs[idx] = std::current_exception();
      cc->close();
      sc->close();
    }
  };
  std::thread server_thread(body, 1, ring::Party::kServer, std::ref(*sc),
                            opts.server_seed, std::ref(out.server));
  body(0, ring::Party::kClient, *cc, opts.client_seed, out.client);
  server_thread.join();

  for (auto& e : errs) {
    if (!e) continue;
    try {
      std::rethrow_exception(e);
    } catch (const TransportError&) {
      continue;
    } catch (...) {
      throw;
    }
  }
  for (auto& e : errs) {
    if (e) std::rethrow_exception(e);
  }
  out.client_stats = cc->stats();
  out.server_stats = sc->stats();
  out.client_transcript = cc->transcript();
  out.server_transcript = sc->transcript();
  return out;
}

// Element-wise reconstruction of two share vectors.
std::vector<double> reconstruct_all(std::span<const uint64_t> client,
                                    std::span<const uint64_t> server,
                                    const ring::FixedPointCodec& codec);

}  // namespace rsqrt2pc
