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
#include "rsqrt2pc/transport.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <future>
#include <thread>

#include "rsqrt2pc/errors.h"

namespace rsqrt2pc::transport {

CommStats CommStats::operator-(const CommStats& o) const {
  return CommStats{bytes_sent - o.bytes_sent,
                   bytes_received - o.bytes_received,
                   payload_bytes_sent - o.payload_bytes_sent,
                   frames_sent - o.frames_sent,
                   frames_received - o.frames_received,
                   rounds - o.rounds};
}

CommStats& CommStats::operator+=(const CommStats& o) {
  bytes_sent += o.bytes_sent;
  bytes_received += o.bytes_received;
  payload_bytes_sent += o.payload_bytes_sent;
  frames_sent += o.frames_sent;
  frames_received += o.frames_received;
  rounds += o.rounds;
  return *this;
}

void Channel::send_frame(std::span<const uint8_t> payload, bool continuation) {
  if (payload.size() > kMaxFrameBytes) {
    throw TransportError("frame of " + std::to_string(payload.size()) +
                         " bytes exceeds the 2^24 limit");
  }
  std::vector<uint8_t> buf(kHeaderBytes + payload.size());
  const auto n = static_cast<uint32_t>(payload.size());
  for (size_t k = 0; k < kHeaderBytes; ++k) {
    buf[k] = static_cast<uint8_t>(n >> (8 * k));
  }
  std::copy(payload.begin(), payload.end(), buf.begin() + kHeaderBytes);
  write_all(buf.data(), buf.size());

  std::lock_guard lock(mu_);
  stats_.bytes_sent += buf.size();
  stats_.payload_bytes_sent += payload.size();
  stats_.frames_sent += 1;
  if (!continuation && phase_ != Phase::kSending) {
    stats_.rounds += 1;
    phase_ = Phase::kSending;
  }
  if (recording_) {
    transcript_.insert(transcript_.end(), buf.begin(), buf.end());
  }
}

std::vector<uint8_t> Channel::recv_frame(bool continuation) {
  uint8_t header[kHeaderBytes];
  read_exact(header, kHeaderBytes);
  uint32_t n = 0;
  for (size_t k = 0; k < kHeaderBytes; ++k) {
    n |= static_cast<uint32_t>(header[k]) << (8 * k);
  }
  if (n > kMaxFrameBytes) {
    close();
    throw TransportError("peer announced an oversize frame of " +
                         std::to_string(n) + " bytes");
  }
  std::vector<uint8_t> payload(n);
  if (n > 0) read_exact(payload.data(), n);

  std::lock_guard lock(mu_);
  stats_.bytes_received += kHeaderBytes + n;
  stats_.frames_received += 1;
  if (!continuation) {
    if (phase_ == Phase::kSending) {
      phase_ = Phase::kAnswered;
    } else if (phase_ != Phase::kPassive) {
      stats_.rounds += 1;
      phase_ = Phase::kPassive;
    }
  }
  return payload;
}

CommStats Channel::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

void Channel::record_transcript(bool on) {
  std::lock_guard lock(mu_);
  recording_ = on;
}

std::vector<uint8_t> Channel::transcript() const {
  std::lock_guard lock(mu_);
  return transcript_;
}

namespace {

class BytePipe {
 public:
  void write(const uint8_t* data, size_t n) {
    std::lock_guard lock(mu_);
    if (closed_) throw TransportError("write on closed in-process channel");
    buf_.insert(buf_.end(), data, data + n);
    cv_.notify_all();
  }

  void read(uint8_t* data, size_t n) {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return buf_.size() >= n || closed_; });
    if (buf_.size() < n) {
      throw TransportError("in-process peer closed the channel");
    }
    std::copy_n(buf_.begin(), n, data);
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(n));
  }

  void close() {
    std::lock_guard lock(mu_);
    closed_ = true;
    cv_.notify_all();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<uint8_t> buf_;
  bool closed_ = false;
};

class InprocChannel final : public Channel {
 public:
  InprocChannel(std::shared_ptr<BytePipe> in, std::shared_ptr<BytePipe> out)
      : in_(std::move(in)), out_(std::move(out)) {}
  ~InprocChannel() override { close(); }

  void close() override {
    in_->close();
    out_->close();
  }

 protected:
  void write_all(const uint8_t* data, size_t n) override { out_->write(data, n); }
  void read_exact(uint8_t* data, size_t n) override { in_->read(data, n); }

 private:
  std::shared_ptr<BytePipe> in_;
  std::shared_ptr<BytePipe> out_;
};

[[noreturn]] void throw_errno(const std::string& what) {
  throw TransportError(what + ": " + std::strerror(errno));
}

sockaddr_in resolve(const std::string& host, uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) == 1) return addr;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (getaddrinfo(host.c_str(), nullptr, &hints, &res) != 0 || res == nullptr) {
    throw TransportError("cannot resolve host '" + host + "'");
  }
  addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
  freeaddrinfo(res);
  return addr;
}

void set_nodelay(int fd) {
  int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

}  // namespace

std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> open_inproc() {
  auto a_to_b = std::make_shared<BytePipe>();
  auto b_to_a = std::make_shared<BytePipe>();
  return {std::make_unique<InprocChannel>(b_to_a, a_to_b),
          std::make_unique<InprocChannel>(a_to_b, b_to_a)};
}

SocketChannel::SocketChannel(int fd) : fd_(fd) { set_nodelay(fd); }

SocketChannel::~SocketChannel() { close(); }

void SocketChannel::close() {
  const int fd = fd_.exchange(-1);
  if (fd >= 0) {
    ::shutdown(fd, SHUT_RDWR);
    ::close(fd);
  }
}

void SocketChannel::write_all(const uint8_t* data, size_t n) {
  while (n > 0) {
    const int fd = fd_.load();
    if (fd < 0) throw TransportError("write on closed socket");
    const ssize_t w = ::send(fd, data, n, MSG_NOSIGNAL);
    if (w < 0) {
      if (errno == EINTR) continue;
      throw_errno("socket send failed");
    }
    wire_written_ += static_cast<uint64_t>(w);
    data += w;
    n -= static_cast<size_t>(w);
  }
}

void SocketChannel::read_exact(uint8_t* data, size_t n) {
  while (n > 0) {
    const int fd = fd_.load();
    if (fd < 0) throw TransportError("read on closed socket");
    const ssize_t r = ::recv(fd, data, n, 0);
    if (r == 0) throw TransportError("socket peer closed the connection");
    if (r < 0) {
      if (errno == EINTR) continue;
      throw_errno("socket recv failed");
    }
    data += r;
    n -= static_cast<size_t>(r);
  }
}

SocketListener::SocketListener(const std::string& host, uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw_errno("socket");
  int one = 1;
  setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr = resolve(host, port);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    const std::string msg = "bind " + host + ":" + std::to_string(port);
    ::close(fd_);
    throw_errno(msg);
  }
  if (::listen(fd_, 4) != 0) {
    ::close(fd_);
    throw_errno("listen");
  }
  socklen_t len = sizeof(addr);
  getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

SocketListener::~SocketListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<SocketChannel> SocketListener::accept() {
  for (;;) {
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd >= 0) return std::make_unique<SocketChannel>(fd);
    if (errno != EINTR) throw_errno("accept");
  }
}

std::unique_ptr<SocketChannel> connect_socket(const std::string& host,
                                              uint16_t port, int retries) {
  sockaddr_in addr = resolve(host, port);
  for (int attempt = 0;; ++attempt) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw_errno("socket");
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0) {
      return std::make_unique<SocketChannel>(fd);
    }
    const int err = errno;
    ::close(fd);
    if (attempt >= retries) {
      errno = err;
      throw_errno("connect " + host + ":" + std::to_string(port));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

std::pair<std::unique_ptr<SocketChannel>, std::unique_ptr<SocketChannel>>
open_socket_pair() {
  SocketListener listener("127.0.0.1", 0);
  auto pending = std::async(std::launch::async,
                            [&] { return connect_socket("127.0.0.1",
                                                        listener.port()); });
  auto accepted = listener.accept();
  return {std::move(accepted), pending.get()};
}

void send_elements(Channel& ch, std::span<const uint64_t> values,
                   const ring::FixedPointCodec& codec) {
  const size_t eb = codec.element_bytes();
  const size_t per_frame = kMaxFrameBytes / eb;
  size_t pos = 0;
  bool first = true;
  do {
    const size_t count = std::min(per_frame, values.size() - pos);
    std::vector<uint8_t> buf(count * eb);
    for (size_t i = 0; i < count; ++i) {
      const uint64_t v = codec.wrap(values[pos + i]);
      for (size_t k = 0; k < eb; ++k) {
        buf[i * eb + k] = static_cast<uint8_t>(v >> (8 * k));
      }
    }
    ch.send_frame(buf, !first);
    first = false;
    pos += count;
  } while (pos < values.size());
}

std::vector<uint64_t> recv_elements(Channel& ch, size_t n,
                                    const ring::FixedPointCodec& codec) {
  const size_t eb = codec.element_bytes();
  const size_t per_frame = kMaxFrameBytes / eb;
  std::vector<uint64_t> out;
  out.reserve(n);
  bool first = true;
  do {
    const size_t expect = std::min(per_frame, n - out.size());
    const auto buf = ch.recv_frame(!first);
    first = false;
    if (buf.size() != expect * eb) {
      throw ProtocolError("expected " + std::to_string(expect * eb) +
                          " payload bytes, got " + std::to_string(buf.size()));
    }
    for (size_t i = 0; i < expect; ++i) {
      uint64_t v = 0;
      for (size_t k = 0; k < eb; ++k) {
        v |= static_cast<uint64_t>(buf[i * eb + k]) << (8 * k);
      }
      out.push_back(codec.wrap(v));
    }
  } while (out.size() < n);
  return out;
}

}  // namespace rsqrt2pc::transport
