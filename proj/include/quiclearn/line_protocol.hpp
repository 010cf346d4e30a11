#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "quiclearn/mapper.hpp"

namespace quiclearn {

// Connection-level failure talking to a remote target: refusal, disconnect,
// or a control message (RESET) left unanswered. Distinct from a quiet target,
// which is an ordinary EXP observation.
class SocketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Client side of the newline-delimited protocol: one input symbol per line
// out, one output per line back; "RESET" must be answered with "OK".
// A read timeout on a symbol is reported as EXP (the remote chose silence).
class SocketAbstractSul : public AbstractSul {
 public:
  SocketAbstractSul(const std::string& host, std::uint16_t port,
                    std::chrono::milliseconds timeout =
                        std::chrono::milliseconds(2000));
  ~SocketAbstractSul() override;

  SocketAbstractSul(const SocketAbstractSul&) = delete;
  SocketAbstractSul& operator=(const SocketAbstractSul&) = delete;

  Output send_symbol(const Symbol& symbol) override;
  void reset() override;

 private:
  std::string send_line(const std::string& line, bool timeout_is_silence);
  int fd_ = -1;
  std::chrono::milliseconds timeout_;
  std::string buffer_;  // bytes read past the last newline
};

// Server side: exposes a SimAbstractSul over the same protocol. One client
// at a time; each new connection and each RESET line starts a fresh session.
// Unknown symbols get "ERROR:unknown-symbol" and the connection stays up.
class LineSulServer {
 public:
  LineSulServer(const std::string& host, std::uint16_t port,
                QuicSimServer::Config cfg);
  ~LineSulServer();

  LineSulServer(const LineSulServer&) = delete;
  LineSulServer& operator=(const LineSulServer&) = delete;

  std::uint16_t port() const { return port_; }

  // Accept loop; returns after stop(). Client disconnects just recycle the
  // listener.
  void run();
  void stop();

 private:
  void serve_client(int fd);

  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  SimAbstractSul sul_;
};

}  // namespace quiclearn
