#pragma once

#include <random>

#include "quiclearn/oracles.hpp"

namespace quiclearn {

struct RandomEqConfig {
  std::uint64_t num_queries = 100;  // words tried per invocation
  std::size_t min_len = 5;
  std::size_t max_len = 10;
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

// Samples uniform random words (length uniform in [min_len, max_len], symbols
// uniform over the hypothesis alphabet) and compares target vs. hypothesis
// outputs. The RNG is seeded once at construction and its stream rolls across
// invocations, so successive rounds within one learning run explore fresh
// words while a fresh oracle with the same config reproduces the same run.
class RandomWordOracle : public EquivalenceOracle {
 public:
  explicit RandomWordOracle(RandomEqConfig cfg);

  std::optional<Word> find_counterexample(const MealyMachine& hypothesis,
                                          MembershipOracle& target) override;
  std::uint64_t words_tested() const { return words_tested_; }

 private:
  RandomEqConfig cfg_;
  std::mt19937_64 rng_;
  std::uint64_t words_tested_ = 0;
};

// Compares the hypothesis against a known reference machine instead of
// sampling; returns the shortest separating word. Used in tests and anywhere
// the ground truth is available.
class ExhaustiveOracle : public EquivalenceOracle {
 public:
  explicit ExhaustiveOracle(MealyMachine reference);

  std::optional<Word> find_counterexample(const MealyMachine& hypothesis,
                                          MembershipOracle& target) override;
  const MealyMachine& reference() const { return reference_; }

 private:
  MealyMachine reference_;
};

}  // namespace quiclearn
