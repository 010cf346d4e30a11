#include "quiclearn/eq_oracles.hpp"

#include <stdexcept>

#include "quiclearn/rng.hpp"

namespace quiclearn {

void RandomEqConfig::validate() const {
  if (num_queries == 0)
    throw std::invalid_argument("num_queries must be positive");
  if (min_len == 0) throw std::invalid_argument("min_len must be positive");
  if (max_len < min_len)
    throw std::invalid_argument("max_len must be >= min_len");
}

RandomWordOracle::RandomWordOracle(RandomEqConfig cfg)
    : cfg_(cfg), rng_(mix_seed(cfg.seed, 2)) {
  cfg_.validate();
}

std::optional<Word> RandomWordOracle::find_counterexample(
    const MealyMachine& hypothesis, MembershipOracle& target) {
  const auto& inputs = hypothesis.inputs();
  if (inputs.empty())
    throw std::invalid_argument("hypothesis has no input symbols");
  for (std::uint64_t q = 0; q < cfg_.num_queries; ++q) {
    std::size_t len =
        cfg_.min_len + static_cast<std::size_t>(
                           uniform_below(rng_, cfg_.max_len - cfg_.min_len + 1));
    Word w;
    w.reserve(len);
    for (std::size_t i = 0; i < len; ++i)
      w.push_back(inputs[uniform_below(rng_, inputs.size())]);
    ++words_tested_;
    if (target.query(w) != hypothesis.run(w)) return w;
  }
  return std::nullopt;
}

ExhaustiveOracle::ExhaustiveOracle(MealyMachine reference)
    : reference_(std::move(reference)) {
  reference_.validate();
}

std::optional<Word> ExhaustiveOracle::find_counterexample(
    const MealyMachine& hypothesis, MembershipOracle&) {
  return equivalent(reference_, hypothesis);
}

}  // namespace quiclearn
