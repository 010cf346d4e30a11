#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace quiclearn {

// Handshake and data frames, crypto replaced by opaque named tags.
enum class FrameKind {
  Chlo,       // client hello (initial, full, or 0-RTT depending on tags)
  Rej,        // rejection carrying fresh SCFG/STK tokens
  Shlo,       // server hello, handshake complete
  HttpGet,
  HttpResp,
  Ack,        // bare acknowledgement, no payload
  ConnClose,
  Prst,       // public reset
};

std::string_view frame_kind_name(FrameKind k);

struct Frame {
  FrameKind kind;
  int stream_id = 0;
  std::map<std::string, std::string> tags;

  bool operator==(const Frame&) const = default;
};

struct ConcretePacket {
  std::int64_t conn_id = -1;
  std::vector<Frame> frames;

  bool operator==(const ConcretePacket&) const = default;
};

inline constexpr int kHandshakeStream = 1;
inline constexpr int kHeadersStream = 3;

inline constexpr const char* kTagScfg = "SCFG";  // server config token
inline constexpr const char* kTagStk = "STK";    // source-address token
inline constexpr const char* kTagSni = "SNI";

}  // namespace quiclearn
