#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "quiclearn/mealy.hpp"

namespace quiclearn {

// A resettable black box that answers output queries: each call stands for
// one reset followed by running the whole word. Implementations over noisy
// targets may internally repeat and vote; `revision()` lets them signal that
// an answer reported earlier has since been corrected, so callers holding
// derived results (e.g. an observation table) know to rebuild.
class MembershipOracle {
 public:
  virtual ~MembershipOracle() = default;

  // One output per input symbol of w.
  virtual std::vector<Output> query(const Word& w) = 0;

  // Physical input symbols pushed at the target so far, repeats included.
  virtual std::uint64_t symbols_sent() const { return 0; }

  // Monotonic counter, bumped whenever a previously returned answer changes.
  virtual std::uint64_t revision() const { return 0; }
};

class EquivalenceOracle {
 public:
  virtual ~EquivalenceOracle() = default;

  // A word on which hypothesis and target outputs differ, or nullopt if none
  // was found within this oracle's budget.
  virtual std::optional<Word> find_counterexample(const MealyMachine& hypothesis,
                                                  MembershipOracle& target) = 0;
};

// Membership oracle backed by an in-memory machine; the workhorse for tests
// and for learning runs against known references.
class MachineOracle : public MembershipOracle {
 public:
  explicit MachineOracle(MealyMachine m) : m_(std::move(m)) { m_.validate(); }

  std::vector<Output> query(const Word& w) override {
    symbols_ += w.size();
    return m_.run(w);
  }
  std::uint64_t symbols_sent() const override { return symbols_; }
  const MealyMachine& machine() const { return m_; }

 private:
  MealyMachine m_;
  std::uint64_t symbols_ = 0;
};

}  // namespace quiclearn
