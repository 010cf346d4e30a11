#pragma once

#include <vector>

#include "quiclearn/mealy.hpp"

namespace quiclearn {

// Abstract input symbols spoken between learner and mapper.
inline const Symbol kInitChlo = "INIT-CHLO";   // first-contact hello, no tokens
inline const Symbol kFullChlo = "FULL-CHLO";   // hello with stored tokens
inline const Symbol kZeroRttChlo = "0RTT-CHLO";  // new connection, old tokens
inline const Symbol kGet = "GET";
inline const Symbol kClose = "CLOSE";

// Abstract outputs.
inline const Output kOutRej = "REJ";
inline const Output kOutShlo = "SHLO";
inline const Output kOutHttp = "HTTP";
inline const Output kOutClosed = "CLOSED";
inline const Output kOutPrst = "PRST";
inline const Output kOutExp = "EXP";  // nothing observable before the timeout

std::vector<Symbol> minimal_alphabet();   // INIT-CHLO FULL-CHLO GET CLOSE
std::vector<Symbol> extended_alphabet();  // minimal + 0RTT-CHLO

}  // namespace quiclearn
