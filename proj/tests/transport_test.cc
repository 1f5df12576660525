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
#include <chrono>
#include <cstring>
#include <future>
#include <thread>

#include "gtest/gtest.h"
#include "rsqrt2pc/errors.h"
#include "rsqrt2pc/flood.h"
#include "rsqrt2pc/rsqrt.h"
#include "rsqrt2pc/session.h"
#include "rsqrt2pc/transport.h"
#include "test_util.h"

namespace rsqrt2pc::transport {
namespace {

std::vector<uint8_t> bytes(std::string_view s) {
  return {s.begin(), s.end()};
}

TEST(InprocTest, FreshEndpointIsZero) {
  auto [a, b] = open_inproc();
  EXPECT_TRUE(a->stats().is_zero());
  EXPECT_TRUE(b->stats().is_zero());
}

TEST(InprocTest, Echo) {
  auto [a, b] = open_inproc();
  a->send_frame(bytes("hello"));
  const auto got = b->recv_frame();
  b->send_frame(got);
  EXPECT_EQ(a->recv_frame(), bytes("hello"));
}

TEST(InprocTest, TenThousandFramesInOrder) {
  auto [a, b] = open_inproc();
  std::thread writer([&a = *a] {
    for (uint32_t i = 0; i < 10000; ++i) {
      uint8_t buf[4];
      std::memcpy(buf, &i, 4);
      a.send_frame(buf);
    }
  });
  for (uint32_t i = 0; i < 10000; ++i) {
    const auto f = b->recv_frame();
    ASSERT_EQ(f.size(), 4u);
    uint32_t v;
    std::memcpy(&v, f.data(), 4);
    ASSERT_EQ(v, i);
  }
  writer.join();
  EXPECT_EQ(b->stats().frames_received, 10000u);
}

TEST(InprocTest, SixteenBytesCountTwenty) {
  auto [a, b] = open_inproc();
  const std::vector<uint8_t> p(16, 7);
  a->send_frame(p);
  b->recv_frame();
  EXPECT_EQ(a->stats().bytes_sent, 20u);
  EXPECT_EQ(a->stats().payload_bytes_sent, 16u);
  EXPECT_EQ(a->stats().frames_sent, 1u);
  EXPECT_EQ(b->stats().bytes_received, 20u);
}

TEST(InprocTest, ZeroLengthFrame) {
  auto [a, b] = open_inproc();
  a->send_frame({});
  EXPECT_TRUE(b->recv_frame().empty());
  EXPECT_EQ(a->stats().bytes_sent, kHeaderBytes);
}

TEST(InprocTest, OversizeFrameRejected) {
  auto [a, b] = open_inproc();
  const std::vector<uint8_t> big(kMaxFrameBytes + 1);
  EXPECT_THROW(a->send_frame(big), TransportError);
  EXPECT_TRUE(a->stats().is_zero());
}

TEST(InprocTest, FrameHeaderIsLittleEndian) {
  auto [a, b] = open_inproc();
  a->record_transcript(true);
  a->send_frame(std::vector<uint8_t>(258, 1));
  const auto t = a->transcript();
  ASSERT_EQ(t.size(), 262u);
  EXPECT_EQ(t[0], 2);
  EXPECT_EQ(t[1], 1);
  EXPECT_EQ(t[2], 0);
  EXPECT_EQ(t[3], 0);
}

TEST(RoundTest, InterleavedExchangeIsTwoRounds) {
  auto [a, b] = open_inproc();
  // Both sides send, then both receive, twice.
  for (int i = 0; i < 2; ++i) {
    a->send_frame(bytes("x"));
    b->send_frame(bytes("y"));
    a->recv_frame();
    b->recv_frame();
  }
  EXPECT_EQ(a->stats().rounds, 2u);
  EXPECT_EQ(b->stats().rounds, 2u);
}

TEST(RoundTest, RequestReplyCountsOnInitiator) {
  auto [a, b] = open_inproc();
  // The initiator sees one round per request/reply pair. The responder
  // sees its receive and its reply as separate direction changes.
  for (int i = 0; i < 2; ++i) {
    a->send_frame(bytes("q"));
    b->recv_frame();
    b->send_frame(bytes("r"));
    a->recv_frame();
  }
  EXPECT_EQ(a->stats().rounds, 2u);
  EXPECT_EQ(b->stats().rounds, 3u);
}

TEST(RoundTest, SimultaneousExchangeIsOneRound) {
  auto [a, b] = open_inproc();
  a->send_frame(bytes("x"));
  b->send_frame(bytes("y"));
  a->recv_frame();
  b->recv_frame();
  EXPECT_EQ(a->stats().rounds, 1u);
  EXPECT_EQ(b->stats().rounds, 1u);
}

TEST(RoundTest, ContinuationFramesDoNotOpenRounds) {
  auto [a, b] = open_inproc();
  a->send_frame(bytes("1"));
  a->send_frame(bytes("2"), true);
  b->recv_frame();
  b->recv_frame(true);
  EXPECT_EQ(a->stats().rounds, 1u);
  EXPECT_EQ(a->stats().frames_sent, 2u);
}

TEST(StatsTest, DiffIsConsistent) {
  auto [a, b] = open_inproc();
  a->send_frame(bytes("abc"));
  const auto snap = a->stats();
  a->send_frame(bytes("defg"));
  const auto d = a->stats() - snap;
  EXPECT_EQ(d.bytes_sent, 8u);
  EXPECT_EQ(d.frames_sent, 1u);
  CommStats sum = snap;
  sum += d;
  EXPECT_EQ(sum, a->stats());
}

TEST(ElementsTest, RoundTripAndChunking) {
  auto [a, b] = open_inproc();
  ring::FixedPointCodec c(32, 12);
  std::vector<uint64_t> v(5);
  for (size_t i = 0; i < v.size(); ++i) v[i] = 0x01020304u * (i + 1) & c.mask();
  send_elements(*a, v, c);
  EXPECT_EQ(recv_elements(*b, v.size(), c), v);
  EXPECT_EQ(a->stats().payload_bytes_sent, 20u);

  // More than one frame's worth of 8-byte elements splits into continuations.
  ring::FixedPointCodec w;
  const size_t n = kMaxFrameBytes / 8 + 3;
  std::vector<uint64_t> big(n, 0xdeadbeefcafef00dull);
  std::thread t([&] { send_elements(*a, big, w); });
  EXPECT_EQ(recv_elements(*b, n, w), big);
  t.join();
  EXPECT_EQ(a->stats().rounds, 1u);
}

TEST(SocketTest, LoopbackEcho) {
  auto [a, b] = open_socket_pair();
  a->send_frame(bytes("ping"));
  const auto got = b->recv_frame();
  EXPECT_EQ(got, bytes("ping"));
  b->send_frame(bytes("pong"));
  EXPECT_EQ(a->recv_frame(), bytes("pong"));
}

TEST(SocketTest, ListenerAndConnect) {
  SocketListener l("127.0.0.1", 0);
  ASSERT_NE(l.port(), 0);
  auto fut = std::async(std::launch::async, [&] { return l.accept(); });
  auto cli = connect_socket("127.0.0.1", l.port());
  auto srv = fut.get();
  cli->send_frame(bytes("hi"));
  EXPECT_EQ(srv->recv_frame(), bytes("hi"));
}

TEST(SocketTest, WireBytesMatchCounters) {
  auto [a, b] = open_socket_pair();
  std::thread t([&b = *b] {
    for (int i = 0; i < 100; ++i) b.recv_frame();
  });
  for (int i = 0; i < 100; ++i) a->send_frame(std::vector<uint8_t>(i * 13));
  t.join();
  EXPECT_EQ(a->wire_bytes_written(), a->stats().bytes_sent);
  EXPECT_EQ(b->stats().bytes_received, a->stats().bytes_sent);
}

TEST(SocketTest, AbruptCloseRaisesWithoutHanging) {
  auto [a, b] = open_socket_pair();
  auto fut = std::async(std::launch::async, [&b = *b] { return b.recv_frame(); });
  std::this_thread::sleep_for(std::chrono::milliseconds(20));
  a.reset();
  ASSERT_EQ(fut.wait_for(std::chrono::seconds(10)), std::future_status::ready);
  EXPECT_THROW(fut.get(), TransportError);
}

TEST(InprocTest, CloseUnblocksPeer) {
  auto [a, b] = open_inproc();
  auto fut = std::async(std::launch::async, [&b = *b] { return b.recv_frame(); });
  std::this_thread::sleep_for(std::chrono::milliseconds(20));
  a->close();
  ASSERT_EQ(fut.wait_for(std::chrono::seconds(10)), std::future_status::ready);
  EXPECT_THROW(fut.get(), TransportError);
}

// A short protocol touching mul, open and the flooded rsqrt path.
std::vector<uint64_t> protocol(Session& s, const testing::SharedVec& x) {
  auto y = s.mul(x.of(s.is_server()), x.of(s.is_server()));
  s.open(y);
  rsqrt::RsqrtConfig cfg;
  return rsqrt::rsqrt_shared(s, y, cfg);
}

TEST(TranscriptTest, InprocAndSocketAreByteIdentical) {
  ring::FixedPointCodec c;
  const auto x = testing::share_all({1.5, 2.0, 3.25}, c, 12);
  SessionOptions o;
  o.record_transcript = true;
  o.transport = TransportKind::kInproc;
  auto r1 = run_two_party(o, [&](Session& s) { return protocol(s, x); });
  o.transport = TransportKind::kSocket;
  auto r2 = run_two_party(o, [&](Session& s) { return protocol(s, x); });
  EXPECT_FALSE(r1.client_transcript.empty());
  EXPECT_EQ(r1.client_transcript, r2.client_transcript);
  EXPECT_EQ(r1.server_transcript, r2.server_transcript);
  EXPECT_EQ(r1.client_stats, r2.client_stats);
  EXPECT_EQ(r1.client, r2.client);
}

TEST(TranscriptTest, BeaverDiff) {
  ring::FixedPointCodec c;
  const auto x = testing::share_all({1.5, -2.0}, c, 13);
  SessionOptions o;
  auto r = run_two_party(o, [&](Session& s) {
    const auto before = s.stats();
    s.mul(x.of(s.is_server()), x.of(s.is_server()));
    return s.stats() - before;
  });
  EXPECT_EQ(r.client.rounds, 1u);
  EXPECT_EQ(r.client.payload_bytes_sent, 2u * 2 * 8);
  EXPECT_EQ(r.server.payload_bytes_sent, 2u * 2 * 8);
}

}  // namespace
}  // namespace rsqrt2pc::transport
