// Copyright 2026 The qhegrid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cstring>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "qhe/serialize.hpp"

// One-shot delegated evaluation over TCP. The client holds the key and the
// server runs only the evaluation; the circuit travels in the clear (the
// scheme hides the state, not the computation) and the key type has no
// encoder reachable from the frame encoders below.
//
// Frame: length u32 (big-endian, = payload size + 1) | type u8 | payload.
// Types: 0x01 EVAL_REQUEST, 0x02 EVAL_RESPONSE, 0x7F ERROR.
// Request payload: b r t n m (u32 BE each) | circuit length u32 BE |
// circuit text | ciphertext length u64 BE | ciphertext file bytes.
// Response payload: ciphertext length u64 BE | ciphertext file bytes.
// Error payload: UTF-8 message.

namespace qhe::net {

inline constexpr std::uint8_t kEvalRequest = 0x01;
inline constexpr std::uint8_t kEvalResponse = 0x02;
inline constexpr std::uint8_t kError = 0x7F;
inline constexpr std::uint64_t kDefaultPayloadCap = std::uint64_t(64) << 20;  // 64 MiB

struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RemoteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Frame {
  std::uint8_t type = 0;
  std::string payload;
};

namespace wire {

inline void put_u32be(std::string& out, std::uint32_t v) {
  for (int i = 3; i >= 0; --i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u64be(std::string& out, std::uint64_t v) {
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

struct Reader {
  std::string_view data;
  std::size_t pos = 0;
  void need(std::size_t k) const {
    if (pos + k > data.size()) throw ProtocolError("payload truncated");
  }
  std::uint32_t u32be() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | static_cast<std::uint8_t>(data[pos++]);
    return v;
  }
  std::uint64_t u64be() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | static_cast<std::uint8_t>(data[pos++]);
    return v;
  }
  std::string bytes(std::size_t k) {
    need(k);
    std::string s(data.substr(pos, k));
    pos += k;
    return s;
  }
};

}  // namespace wire

inline std::string encode_frame(const Frame& f) {
  std::string out;
  wire::put_u32be(out, static_cast<std::uint32_t>(f.payload.size() + 1));
  out.push_back(static_cast<char>(f.type));
  out += f.payload;
  return out;
}

struct EvalRequest {
  Gamma gamma;
  std::string circuit_text;
  std::string cipher_bytes;
};

inline std::string encode_eval_request(const EvalRequest& req) {
  std::string p;
  for (int v : {req.gamma.b, req.gamma.r, req.gamma.t, req.gamma.n, req.gamma.m})
    wire::put_u32be(p, static_cast<std::uint32_t>(v));
  wire::put_u32be(p, static_cast<std::uint32_t>(req.circuit_text.size()));
  p += req.circuit_text;
  wire::put_u64be(p, req.cipher_bytes.size());
  p += req.cipher_bytes;
  return p;
}

inline EvalRequest decode_eval_request(std::string_view payload) {
  wire::Reader r{payload};
  EvalRequest req;
  req.gamma.b = static_cast<int>(r.u32be());
  req.gamma.r = static_cast<int>(r.u32be());
  req.gamma.t = static_cast<int>(r.u32be());
  req.gamma.n = static_cast<int>(r.u32be());
  req.gamma.m = static_cast<int>(r.u32be());
  req.circuit_text = r.bytes(r.u32be());
  req.cipher_bytes = r.bytes(static_cast<std::size_t>(r.u64be()));
  if (r.pos != payload.size()) throw ProtocolError("trailing bytes in request");
  return req;
}

inline std::string encode_eval_response(std::string_view cipher_bytes) {
  std::string p;
  wire::put_u64be(p, cipher_bytes.size());
  p += cipher_bytes;
  return p;
}

inline std::string decode_eval_response(std::string_view payload) {
  wire::Reader r{payload};
  std::string cipher = r.bytes(static_cast<std::size_t>(r.u64be()));
  if (r.pos != payload.size()) throw ProtocolError("trailing bytes in response");
  return cipher;
}

namespace detail {

inline void write_all(int fd, std::string_view bytes) {
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    ssize_t n = ::send(fd, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) throw TransportError("send failed");
    sent += static_cast<std::size_t>(n);
  }
}

inline bool read_exact(int fd, char* buf, std::size_t len) {
  std::size_t got = 0;
  while (got < len) {
    ssize_t n = ::recv(fd, buf + got, len - got, 0);
    if (n == 0) return false;
    if (n < 0) throw TransportError("recv failed");
    got += static_cast<std::size_t>(n);
  }
  return true;
}

// Reads one frame; returns false on clean EOF before any byte.
inline bool read_frame(int fd, Frame& out, std::uint64_t payload_cap) {
  char head[4];
  if (!read_exact(fd, head, 4)) return false;
  std::uint32_t length = 0;
  for (char c : head) length = (length << 8) | static_cast<std::uint8_t>(c);
  if (length < 1) throw ProtocolError("frame length must cover the type byte");
  if (length - 1 > payload_cap) throw ProtocolError("payload exceeds cap");
  char type;
  if (!read_exact(fd, &type, 1)) throw TransportError("connection closed mid-frame");
  out.type = static_cast<std::uint8_t>(type);
  out.payload.resize(length - 1);
  if (length > 1 && !read_exact(fd, out.payload.data(), length - 1))
    throw TransportError("connection closed mid-frame");
  return true;
}

struct FdGuard {
  int fd = -1;
  ~FdGuard() {
    if (fd >= 0) ::close(fd);
  }
};

}  // namespace detail

// Evaluation server: one request per connection, connections handled
// concurrently, no shared mutable state across them.
class Server {
 public:
  explicit Server(std::uint64_t payload_cap = kDefaultPayloadCap) : payload_cap_(payload_cap) {}

  ~Server() { stop(); }

  // Binds and starts the accept loop; port 0 picks an ephemeral port.
  // Returns the bound port.
  std::uint16_t start(const std::string& host, std::uint16_t port) {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw TransportError("socket failed");
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) throw TransportError("bad bind address " + host);
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
      ::close(listen_fd_);
      listen_fd_ = -1;
      throw TransportError("bind failed");
    }
    if (::listen(listen_fd_, 16) != 0) {
      ::close(listen_fd_);
      listen_fd_ = -1;
      throw TransportError("listen failed");
    }
    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    bound_port_ = ntohs(bound.sin_port);

    running_ = true;
    accept_thread_ = std::thread([this] { accept_loop(); });
    return bound_port_;
  }

  std::uint16_t bound_port() const { return bound_port_; }

  void stop() {
    if (!running_.exchange(false)) {
      if (accept_thread_.joinable()) accept_thread_.join();
      return;
    }
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
    if (accept_thread_.joinable()) accept_thread_.join();
    std::lock_guard lock(workers_mutex_);
    for (auto& w : workers_)
      if (w.joinable()) w.join();
    workers_.clear();
  }

 private:
  void accept_loop() {
    while (running_) {
      int conn = ::accept(listen_fd_, nullptr, nullptr);
      if (conn < 0) {
        if (!running_) break;
        continue;
      }
      std::lock_guard lock(workers_mutex_);
      workers_.emplace_back([this, conn] { handle(conn); });
    }
  }

  void handle(int conn) {
    detail::FdGuard guard{conn};
    Frame frame;
    try {
      if (!detail::read_frame(conn, frame, payload_cap_)) return;
      if (frame.type != kEvalRequest) throw ProtocolError("unexpected frame type");
      EvalRequest req = decode_eval_request(frame.payload);
      req.gamma.validate();
      Circuit circuit = parse_circuit(req.circuit_text, req.gamma.r);
      if (auto violations = validate_for_gamma(circuit, req.gamma); !violations.empty())
        throw ProtocolError("circuit does not match parameters: " + violations.front());
      CipherState ct = deserialize_cipher(req.cipher_bytes);
      if (gamma_of(ct) != req.gamma) throw ProtocolError("ciphertext parameters differ from request");
      CipherState out = evaluate(circuit, std::move(ct));
      detail::write_all(conn, encode_frame({kEvalResponse, encode_eval_response(serialize_cipher(out))}));
    } catch (const std::exception& e) {
      try {
        detail::write_all(conn, encode_frame({kError, e.what()}));
      } catch (...) {
      }
    }
  }

  std::uint64_t payload_cap_;
  int listen_fd_ = -1;
  std::uint16_t bound_port_ = 0;
  std::atomic<bool> running_{false};
  std::thread accept_thread_;
  std::mutex workers_mutex_;
  std::vector<std::thread> workers_;
};

// Optional tap on the exact bytes crossing the wire (used by tests to show
// no frame ever contains key material).
using FrameTap = std::function<void(std::string_view sent, std::string_view received)>;

// Encrypts locally, ships ciphertext + circuit, decrypts the response.
// The key never reaches any frame encoder.
inline DecryptResult client_delegate(const std::string& host, std::uint16_t port, const SecretKey& key,
                                     const PlainState& input, const Circuit& circuit, const Gamma& gamma,
                                     Backend backend, const DenseOptions& options = {},
                                     std::uint64_t payload_cap = kDefaultPayloadCap,
                                     const FrameTap& tap = nullptr) {
  CipherState ct = encrypt(key, assemble_input(input, gamma), backend, options);

  EvalRequest req{gamma, serialize_circuit(circuit), serialize_cipher(ct)};
  std::string request_bytes = encode_frame({kEvalRequest, encode_eval_request(req)});

  detail::FdGuard sock{::socket(AF_INET, SOCK_STREAM, 0)};
  if (sock.fd < 0) throw TransportError("socket failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) throw TransportError("bad server address " + host);
  if (::connect(sock.fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
    throw TransportError("cannot connect to " + host + ":" + std::to_string(port));

  detail::write_all(sock.fd, request_bytes);
  Frame reply;
  if (!detail::read_frame(sock.fd, reply, payload_cap)) throw TransportError("server closed without replying");
  if (tap) tap(request_bytes, encode_frame(reply));
  if (reply.type == kError) throw RemoteError("server error: " + reply.payload);
  if (reply.type != kEvalResponse) throw ProtocolError("unexpected frame type in response");

  CipherState evaluated = deserialize_cipher(decode_eval_response(reply.payload));
  if (gamma_of(evaluated) != gamma) throw ProtocolError("response parameters differ from request");
  return decrypt(key, evaluated);
}

}  // namespace qhe::net
