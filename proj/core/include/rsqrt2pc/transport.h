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

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rsqrt2pc/ring.h"

namespace rsqrt2pc::transport {

// Frames are a 4-byte little-endian length followed by the payload.
inline constexpr size_t kHeaderBytes = 4;
inline constexpr size_t kMaxFrameBytes = size_t{1} << 24;

// Counters of one endpoint. bytes_* include frame headers.
//
// Rounds: an endpoint is either sending, receiving after its own send, or
// receiving passively. A new round starts on a send that is not part of an
// ongoing send burst, and on a receive that does not answer a send of ours.
// A simultaneous exchange is one round for both sides; a one-way message
// followed by a reply is two. Protocol rounds are the max over both ends.
struct CommStats {
  uint64_t bytes_sent = 0;
  uint64_t bytes_received = 0;
  uint64_t payload_bytes_sent = 0;
  uint64_t frames_sent = 0;
  uint64_t frames_received = 0;
  uint64_t rounds = 0;

  CommStats operator-(const CommStats& o) const;
  CommStats& operator+=(const CommStats& o);
  bool operator==(const CommStats&) const = default;
  bool is_zero() const { return *this == CommStats{}; }
};

class Channel {
 public:
  virtual ~Channel() = default;
  Channel() = default;
  Channel(const Channel&) = delete;
  Channel& operator=(const Channel&) = delete;

  // A continuation frame belongs to the same logical message as the frame
  // before it and never opens a round.
  void send_frame(std::span<const uint8_t> payload, bool continuation = false);
  std::vector<uint8_t> recv_frame(bool continuation = false);

  CommStats stats() const;

  // Records every byte this endpoint writes, headers included.
  void record_transcript(bool on);
  std::vector<uint8_t> transcript() const;

  // Idempotent; a blocked peer observes TransportError.
  virtual void close() = 0;

 protected:
  virtual void write_all(const uint8_t* data, size_t n) = 0;
  virtual void read_exact(uint8_t* data, size_t n) = 0;

 private:
  enum class Phase { kIdle, kSending, kAnswered, kPassive };

  mutable std::mutex mu_;
  CommStats stats_;
  Phase phase_ = Phase::kIdle;
  bool recording_ = false;
  std::vector<uint8_t> transcript_;
};

// In-memory duplex pair with the same framing and accounting as sockets.
std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> open_inproc();

class SocketChannel final : public Channel {
 public:
  explicit SocketChannel(int fd);
  ~SocketChannel() override;

  void close() override;
  // Bytes actually accepted by the kernel on this socket.
  uint64_t wire_bytes_written() const { return wire_written_.load(); }

 protected:
  void write_all(const uint8_t* data, size_t n) override;
  void read_exact(uint8_t* data, size_t n) override;

 private:
  std::atomic<int> fd_;
  std::atomic<uint64_t> wire_written_{0};
};

class SocketListener {
 public:
  // port 0 picks an ephemeral port.
  SocketListener(const std::string& host, uint16_t port);
  ~SocketListener();
  SocketListener(const SocketListener&) = delete;
  SocketListener& operator=(const SocketListener&) = delete;

  uint16_t port() const { return port_; }
  std::unique_ptr<SocketChannel> accept();

 private:
  int fd_ = -1;
  uint16_t port_ = 0;
};

std::unique_ptr<SocketChannel> connect_socket(const std::string& host,
                                              uint16_t port,
                                              int retries = 50);

// Connected loopback pair (first = accepted side, second = connecting side).
std::pair<std::unique_ptr<SocketChannel>, std::unique_ptr<SocketChannel>>
open_socket_pair();

// Ring elements travel as element_bytes() little-endian bytes each, split
// into as many frames as the size limit requires. The receiver must know n.
void send_elements(Channel& ch, std::span<const uint64_t> values,
                   const ring::FixedPointCodec& codec);
std::vector<uint64_t> recv_elements(Channel& ch, size_t n,
                                    const ring::FixedPointCodec& codec);

}  // namespace rsqrt2pc::transport
