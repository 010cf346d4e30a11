#include "quiclearn/quic_server.hpp"

#include <stdexcept>

#include "quiclearn/rng.hpp"

namespace quiclearn {

std::string_view frame_kind_name(FrameKind k) {
  switch (k) {
    case FrameKind::Chlo: return "CHLO";
    case FrameKind::Rej: return "REJ";
    case FrameKind::Shlo: return "SHLO";
    case FrameKind::HttpGet: return "HTTP_GET";
    case FrameKind::HttpResp: return "HTTP_RESP";
    case FrameKind::Ack: return "ACK";
    case FrameKind::ConnClose: return "CONN_CLOSE";
    case FrameKind::Prst: return "PRST";
  }
  return "?";
}

QuicSimServer::QuicSimServer(Config cfg)
    : noise_retx_(cfg.noise_retx), rng_(mix_seed(cfg.seed, 1)) {
  if (cfg.noise_retx < 0.0 || cfg.noise_retx > 1.0)
    throw std::invalid_argument("noise_retx must be in [0, 1]");
}

void QuicSimServer::reset() {
  connections_.clear();
  last_response_.clear();
}

ConcretePacket QuicSimServer::reply(std::int64_t conn_id, FrameKind kind,
                                    int stream) const {
  ConcretePacket p;
  p.conn_id = conn_id;
  p.frames.push_back(Frame{kind, stream, {}});
  return p;
}

std::optional<ConcretePacket> QuicSimServer::handle(
    const ConcretePacket& packet) {
  return inject_noise(packet.conn_id, respond(packet));
}

std::optional<ConcretePacket> QuicSimServer::respond(
    const ConcretePacket& packet) {
  // A real endpoint answers garbage with a public reset rather than a parse
  // error; anything that is not exactly one well-formed frame counts as
  // garbage here.
  if (packet.frames.size() != 1)
    return reply(packet.conn_id, FrameKind::Prst, kHandshakeStream);
  const Frame& f = packet.frames.front();

  auto conn = connections_.find(packet.conn_id);
  bool known = conn != connections_.end();
  bool closed = known && conn->second == Phase::Closed;

  switch (f.kind) {
    case FrameKind::Chlo: {
      if (packet.conn_id < 0)
        return reply(packet.conn_id, FrameKind::Prst, kHandshakeStream);
      if (closed)
        return reply(packet.conn_id, FrameKind::Prst, kHandshakeStream);
      if (known && (conn->second == Phase::Established ||
                    conn->second == Phase::Served)) {
        // Handshake already done on this connection; a stray hello is
        // ignored, matching a server that drops unexpected crypto frames.
        return std::nullopt;
      }
      auto scfg = f.tags.find(kTagScfg);
      auto stk = f.tags.find(kTagStk);
      bool fresh = scfg != f.tags.end() && stk != f.tags.end() &&
                   scfg->second == current_token() &&
                   stk->second == current_token();
      if (fresh) {
        connections_[packet.conn_id] = Phase::Established;
        return reply(packet.conn_id, FrameKind::Shlo, kHandshakeStream);
      }
      // No tokens, stale tokens, or forged ones: reject and hand out the
      // current pair.
      connections_[packet.conn_id] = Phase::Rejected;
      ConcretePacket rej = reply(packet.conn_id, FrameKind::Rej,
                                 kHandshakeStream);
      rej.frames.front().tags[kTagScfg] = current_token();
      rej.frames.front().tags[kTagStk] = current_token();
      return rej;
    }
    case FrameKind::HttpGet: {
      if (!known) return std::nullopt;
      switch (conn->second) {
        case Phase::Closed:
          return reply(packet.conn_id, FrameKind::Prst, kHandshakeStream);
        case Phase::Rejected:
          // Encrypted request before the handshake finished: undecryptable,
          // dropped.
          return std::nullopt;
        case Phase::Established:
          conn->second = Phase::Served;
          return reply(packet.conn_id, FrameKind::HttpResp, kHeadersStream);
        case Phase::Served:
          // Duplicate request; only the transport-level acknowledgement is
          // visible.
          return reply(packet.conn_id, FrameKind::Ack, kHandshakeStream);
      }
      return std::nullopt;
    }
    case FrameKind::ConnClose: {
      if (!known || closed)
        return reply(packet.conn_id, FrameKind::Prst, kHandshakeStream);
      conn->second = Phase::Closed;
      return reply(packet.conn_id, FrameKind::ConnClose, kHandshakeStream);
    }
    default:
      // Server-to-client frame kinds arriving at the server are garbage.
      return reply(packet.conn_id, FrameKind::Prst, kHandshakeStream);
  }
}

std::optional<ConcretePacket> QuicSimServer::inject_noise(
    std::int64_t conn_id, std::optional<ConcretePacket> response) {
  if (noise_retx_ > 0.0) {
    auto cached = last_response_.find(conn_id);
    if (cached != last_response_.end() &&
        uniform_unit(rng_) < noise_retx_) {
      // Deliver the connection's previous response again, as if the real one
      // were lost and an old retransmission arrived instead. The cache is
      // left untouched so repeated substitutions replay the same packet.
      ++substitutions_;
      return cached->second;
    }
  }
  if (response && conn_id >= 0) last_response_[conn_id] = *response;
  return response;
}

}  // namespace quiclearn
