#include <doctest.h>

#include <stdexcept>

#include "quiclearn/quic_server.hpp"

using namespace quiclearn;

namespace {

ConcretePacket chlo(std::int64_t conn,
                    std::map<std::string, std::string> tags = {}) {
  ConcretePacket p;
  p.conn_id = conn;
  p.frames.push_back(Frame{FrameKind::Chlo, kHandshakeStream, std::move(tags)});
  return p;
}

ConcretePacket get(std::int64_t conn) {
  ConcretePacket p;
  p.conn_id = conn;
  p.frames.push_back(
      Frame{FrameKind::HttpGet, kHeadersStream, {{kTagSni, "www.example.org"}}});
  return p;
}

ConcretePacket close_pkt(std::int64_t conn) {
  ConcretePacket p;
  p.conn_id = conn;
  p.frames.push_back(Frame{FrameKind::ConnClose, kHandshakeStream, {}});
  return p;
}

FrameKind kind_of(const std::optional<ConcretePacket>& r) {
  REQUIRE(r.has_value());
  REQUIRE_FALSE(r->frames.empty());
  return r->frames.front().kind;
}

}  // namespace

TEST_CASE("handshake: reject, hand out tokens, then accept them") {
  QuicSimServer server;
  auto rej = server.handle(chlo(0));
  REQUIRE(kind_of(rej) == FrameKind::Rej);
  auto tags = rej->frames.front().tags;
  CHECK(tags.at(kTagScfg) == "e0");
  CHECK(tags.at(kTagStk) == "e0");
  CHECK(rej->conn_id == 0);

  auto shlo = server.handle(chlo(0, tags));
  CHECK(kind_of(shlo) == FrameKind::Shlo);
  CHECK(shlo->frames.front().stream_id == kHandshakeStream);

  // Another hello on the established connection: silence.
  CHECK_FALSE(server.handle(chlo(0, tags)).has_value());
}

TEST_CASE("hellos that cannot succeed") {
  QuicSimServer server;
  CHECK(kind_of(server.handle(chlo(-1))) == FrameKind::Prst);
  CHECK(kind_of(server.handle(chlo(-7, {{kTagScfg, "e0"}, {kTagStk, "e0"}}))) ==
        FrameKind::Prst);

  // Forged tokens still draw a REJ with the real ones.
  auto rej = server.handle(chlo(1, {{kTagScfg, "fake"}, {kTagStk, "fake"}}));
  REQUIRE(kind_of(rej) == FrameKind::Rej);
  CHECK(rej->frames.front().tags.at(kTagScfg) == "e0");
  // Half a token set counts as none.
  CHECK(kind_of(server.handle(chlo(2, {{kTagScfg, "e0"}}))) == FrameKind::Rej);

  // Hello on a closed connection.
  server.handle(chlo(3));
  server.handle(close_pkt(3));
  CHECK(kind_of(server.handle(chlo(3))) == FrameKind::Prst);
}

TEST_CASE("token rotation invalidates old handouts") {
  QuicSimServer server;
  auto tags = server.handle(chlo(0))->frames.front().tags;
  server.rotate_config();
  CHECK(server.config_epoch() == 1);
  CHECK(server.current_token() == "e1");
  auto rej = server.handle(chlo(1, tags));
  REQUIRE(kind_of(rej) == FrameKind::Rej);
  auto fresh = rej->frames.front().tags;
  CHECK(fresh.at(kTagScfg) == "e1");
  CHECK(kind_of(server.handle(chlo(2, fresh))) == FrameKind::Shlo);
}

TEST_CASE("request handling per phase") {
  QuicSimServer server;
  CHECK_FALSE(server.handle(get(9)).has_value());  // unknown connection

  auto tags = server.handle(chlo(0))->frames.front().tags;
  CHECK_FALSE(server.handle(get(0)).has_value());  // rejected: undecryptable

  server.handle(chlo(0, tags));
  auto resp = server.handle(get(0));
  REQUIRE(kind_of(resp) == FrameKind::HttpResp);
  CHECK(resp->frames.front().stream_id == kHeadersStream);

  // Duplicate request: bare acknowledgement only.
  CHECK(kind_of(server.handle(get(0))) == FrameKind::Ack);
  CHECK(kind_of(server.handle(get(0))) == FrameKind::Ack);

  server.handle(close_pkt(0));
  CHECK(kind_of(server.handle(get(0))) == FrameKind::Prst);
}

TEST_CASE("close handling per phase") {
  QuicSimServer server;
  CHECK(kind_of(server.handle(close_pkt(5))) == FrameKind::Prst);  // unknown
  server.handle(chlo(0));
  CHECK(kind_of(server.handle(close_pkt(0))) == FrameKind::ConnClose);
  CHECK(kind_of(server.handle(close_pkt(0))) == FrameKind::Prst);  // again
}

TEST_CASE("garbage draws a public reset") {
  QuicSimServer server;
  ConcretePacket empty;
  empty.conn_id = 0;
  CHECK(kind_of(server.handle(empty)) == FrameKind::Prst);

  ConcretePacket two = chlo(0);
  two.frames.push_back(Frame{FrameKind::Chlo, kHandshakeStream, {}});
  CHECK(kind_of(server.handle(two)) == FrameKind::Prst);

  ConcretePacket backwards;
  backwards.conn_id = 0;
  backwards.frames.push_back(Frame{FrameKind::Rej, kHandshakeStream, {}});
  CHECK(kind_of(server.handle(backwards)) == FrameKind::Prst);
}

TEST_CASE("reset forgets connections but keeps the epoch") {
  QuicSimServer server;
  auto tags = server.handle(chlo(0))->frames.front().tags;
  server.handle(chlo(0, tags));
  server.rotate_config();
  server.reset();
  CHECK_FALSE(server.handle(get(0)).has_value());  // connection gone
  CHECK(server.config_epoch() == 1);               // epoch survived
}

TEST_CASE("noise: cached response substitutes the real one") {
  QuicSimServer::Config cfg;
  cfg.noise_retx = 1.0;  // substitute whenever a cache entry exists
  cfg.seed = 1;
  QuicSimServer server(cfg);

  // First response has no cache to draw from: always clean.
  auto rej = server.handle(chlo(0));
  REQUIRE(kind_of(rej) == FrameKind::Rej);
  // From now on every response on conn 0 is the cached REJ, even where the
  // honest answer would have been silence or SHLO.
  CHECK(kind_of(server.handle(get(0))) == FrameKind::Rej);
  CHECK(kind_of(server.handle(chlo(0, rej->frames.front().tags))) ==
        FrameKind::Rej);
  CHECK(kind_of(server.handle(close_pkt(0))) == FrameKind::Rej);
  CHECK(server.noise_substitutions() == 3);

  // Other connections have their own (empty) history.
  CHECK(kind_of(server.handle(chlo(1))) == FrameKind::Rej);
}

TEST_CASE("noise: connection -1 is never cached") {
  QuicSimServer::Config cfg;
  cfg.noise_retx = 1.0;
  QuicSimServer server(cfg);
  for (int i = 0; i < 5; ++i)
    CHECK(kind_of(server.handle(chlo(-1))) == FrameKind::Prst);
  CHECK(server.noise_substitutions() == 0);
}

TEST_CASE("noise: zero probability never substitutes") {
  QuicSimServer::Config cfg;
  cfg.noise_retx = 0.0;
  QuicSimServer server(cfg);
  auto tags = server.handle(chlo(0))->frames.front().tags;
  server.handle(chlo(0, tags));
  CHECK(kind_of(server.handle(get(0))) == FrameKind::HttpResp);
  CHECK(server.noise_substitutions() == 0);
  CHECK_THROWS_AS(QuicSimServer({1.5, 0}), std::invalid_argument);
}

TEST_CASE("noise: substitution frequency matches the configured rate") {
  QuicSimServer::Config cfg;
  cfg.noise_retx = 0.2;
  cfg.seed = 7;
  QuicSimServer server(cfg);
  server.handle(chlo(0));  // prime the cache with a REJ
  const int trials = 20000;
  int substituted = 0;
  for (int i = 0; i < trials; ++i) {
    // Honest answer here is silence (rejected-phase GET), so any packet back
    // is the cached REJ.
    if (server.handle(get(0)).has_value()) ++substituted;
  }
  double freq = static_cast<double>(substituted) / trials;
  CHECK(freq == doctest::Approx(0.2).epsilon(0.05));
  CHECK(substituted == static_cast<int>(server.noise_substitutions()));
}
