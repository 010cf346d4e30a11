#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>

#include "quiclearn/quic_packets.hpp"

namespace quiclearn {

// Simulated QUIC-style handshake server. Connections move through
// rejected -> established -> served, any of them -> closed; token freshness
// is a config epoch, no actual crypto. Optionally retransmits a connection's
// previous response instead of the real one to model network noise.
class QuicSimServer {
 public:
  struct Config {
    double noise_retx = 0.0;  // per-response substitution probability
    std::uint64_t seed = 0;
  };

  QuicSimServer() = default;
  explicit QuicSimServer(Config cfg);

  // Full receive path: behavior table, then the noise stage. nullopt means
  // the server stayed silent (a timeout from the client's point of view).
  std::optional<ConcretePacket> handle(const ConcretePacket& packet);

  // Forget all connections and cached responses; config epoch and the noise
  // RNG carry over, like a server that kept running while the client left.
  void reset();

  // Invalidate every token handed out so far.
  void rotate_config() { ++epoch_; }

  int config_epoch() const { return epoch_; }
  std::string current_token() const { return "e" + std::to_string(epoch_); }
  std::uint64_t noise_substitutions() const { return substitutions_; }

 private:
  enum class Phase { Rejected, Established, Served, Closed };

  std::optional<ConcretePacket> respond(const ConcretePacket& packet);
  std::optional<ConcretePacket> inject_noise(
      std::int64_t conn_id, std::optional<ConcretePacket> response);
  ConcretePacket reply(std::int64_t conn_id, FrameKind kind, int stream) const;

  std::map<std::int64_t, Phase> connections_;
  std::map<std::int64_t, ConcretePacket> last_response_;
  int epoch_ = 0;
  double noise_retx_ = 0.0;
  std::mt19937_64 rng_{0};
  std::uint64_t substitutions_ = 0;
};

}  // namespace quiclearn
