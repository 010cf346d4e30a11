#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>

#include "quiclearn/observation_table.hpp"

namespace quiclearn {

struct LearnStats {
  std::uint64_t membership_queries = 0;   // distinct words run for the table
  std::uint64_t equivalence_queries = 0;  // equivalence-oracle invocations
  std::uint64_t refinement_rounds = 0;    // accepted counterexamples
  std::uint64_t total_input_symbols_sent = 0;  // physical symbols, repeats too
};

struct LearnConfig {
  // Cap on hypothesis/counterexample rounds. Table stabilization between
  // rounds has its own (large, fixed) safety bound; it terminates on its own
  // for any oracle whose answers are stable between revisions.
  std::size_t max_rounds = 1000;
};

struct LearnResult {
  MealyMachine machine;
  LearnStats stats;
};

// Raised when learning cannot finish (round cap, unstabilizable table).
// Carries the last hypothesis, if one was ever built, for post-mortems.
class LearnError : public std::runtime_error {
 public:
  LearnError(const std::string& what, std::optional<MealyMachine> last,
             LearnStats stats)
      : std::runtime_error(what),
        last_hypothesis(std::move(last)),
        stats(stats) {}
  std::optional<MealyMachine> last_hypothesis;
  LearnStats stats;
};

// Classic active learning loop: build an observation table over `alphabet`,
// stabilize it, conjecture, ask `eq` for a counterexample, fold it back in,
// repeat until the oracle passes. If the membership oracle revises earlier
// answers mid-run (de-noising), the cached table contents are dropped and
// rebuilt from the corrected answers before continuing.
LearnResult learn(MembershipOracle& target, std::vector<Symbol> alphabet,
                  EquivalenceOracle& eq, const LearnConfig& cfg = {});

}  // namespace quiclearn
