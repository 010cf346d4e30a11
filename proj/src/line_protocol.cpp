#include "quiclearn/line_protocol.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace quiclearn {

namespace {

std::string errno_text(const std::string& what) {
  return what + ": " + std::strerror(errno);
}

sockaddr_in make_addr(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
    throw SocketError("bad IPv4 address: " + host);
  return addr;
}

}  // namespace

SocketAbstractSul::SocketAbstractSul(const std::string& host,
                                     std::uint16_t port,
                                     std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  auto addr = make_addr(host, port);
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw SocketError(errno_text("socket"));
  if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    int e = errno;
    ::close(fd_);
    fd_ = -1;
    throw SocketError("connect to " + host + ":" + std::to_string(port) +
                      " failed: " + std::strerror(e));
  }
  int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

SocketAbstractSul::~SocketAbstractSul() {
  if (fd_ >= 0) ::close(fd_);
}

std::string SocketAbstractSul::send_line(const std::string& line,
                                         bool timeout_is_silence) {
  std::string msg = line + "\n";
  const char* p = msg.data();
  std::size_t left = msg.size();
  while (left > 0) {
    ssize_t n = ::write(fd_, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SocketError(errno_text("write"));
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  for (;;) {
    auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string reply = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!reply.empty() && reply.back() == '\r') reply.pop_back();
      return reply;
    }
    pollfd pfd{fd_, POLLIN, 0};
    int pr = ::poll(&pfd, 1, static_cast<int>(timeout_.count()));
    if (pr < 0) {
      if (errno == EINTR) continue;
      throw SocketError(errno_text("poll"));
    }
    if (pr == 0) {
      if (timeout_is_silence) return kOutExp;
      throw SocketError("remote did not answer '" + line + "' in time");
    }
    char chunk[4096];
    ssize_t n = ::read(fd_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SocketError(errno_text("read"));
    }
    if (n == 0) throw SocketError("remote closed the connection");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

Output SocketAbstractSul::send_symbol(const Symbol& symbol) {
  return send_line(symbol, /*timeout_is_silence=*/true);
}

void SocketAbstractSul::reset() {
  std::string reply = send_line("RESET", /*timeout_is_silence=*/false);
  if (reply != "OK")
    throw SocketError("RESET answered with '" + reply + "', want 'OK'");
}

LineSulServer::LineSulServer(const std::string& host, std::uint16_t port,
                             QuicSimServer::Config cfg)
    : sul_(cfg) {
  auto addr = make_addr(host, port);
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw SocketError(errno_text("socket"));
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) !=
      0) {
    int e = errno;
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw SocketError("bind to " + host + ":" + std::to_string(port) +
                      " failed: " + std::strerror(e));
  }
  if (::listen(listen_fd_, 1) != 0) {
    int e = errno;
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw SocketError(std::string("listen failed: ") + std::strerror(e));
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  if (::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len) ==
      0)
    port_ = ntohs(bound.sin_port);
}

LineSulServer::~LineSulServer() {
  stop();
}

void LineSulServer::stop() {
  stopping_.store(true);
  if (listen_fd_ >= 0) {
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
}

void LineSulServer::run() {
  while (!stopping_.load()) {
    int client = ::accept(listen_fd_, nullptr, nullptr);
    if (client < 0) {
      if (errno == EINTR) continue;
      break;  // listener closed by stop()
    }
    int one = 1;
    ::setsockopt(client, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    serve_client(client);
    ::close(client);
  }
}

void LineSulServer::serve_client(int fd) {
  sul_.reset();  // every connection starts from a fresh session
  std::string buffer;
  auto reply = [&](const std::string& s) {
    std::string msg = s + "\n";
    const char* p = msg.data();
    std::size_t left = msg.size();
    while (left > 0) {
      ssize_t n = ::write(fd, p, left);
      if (n <= 0) {
        if (n < 0 && errno == EINTR) continue;
        return false;
      }
      p += n;
      left -= static_cast<std::size_t>(n);
    }
    return true;
  };
  char chunk[4096];
  for (;;) {
    ssize_t n = ::read(fd, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      return;
    }
    if (n == 0) return;  // client hung up
    buffer.append(chunk, static_cast<std::size_t>(n));
    for (;;) {
      auto nl = buffer.find('\n');
      if (nl == std::string::npos) break;
      std::string line = buffer.substr(0, nl);
      buffer.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line == "RESET") {
        sul_.reset();
        if (!reply("OK")) return;
        continue;
      }
      bool known = false;
      for (const auto& s : extended_alphabet())
        if (s == line) known = true;
      if (!known) {
        if (!reply("ERROR:unknown-symbol")) return;
        continue;
      }
      if (!reply(sul_.send_symbol(line))) return;
    }
  }
}

}  // namespace quiclearn
