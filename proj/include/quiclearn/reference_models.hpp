#pragma once

#include "quiclearn/mealy.hpp"

namespace quiclearn {

// Hand-written ground-truth models of the simulated server as seen through
// the mapper. Five states each: fresh, rejected, established, served, closed.
MealyMachine reference_minimal();   // over the four-symbol alphabet
MealyMachine reference_extended();  // adds 0RTT-CHLO

}  // namespace quiclearn
