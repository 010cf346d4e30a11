#include <doctest.h>

#include <stdexcept>

#include <set>

#include "quiclearn/eq_oracles.hpp"
#include "quiclearn/quic_symbols.hpp"
#include "quiclearn/reference_models.hpp"
#include "test_support.hpp"

using namespace quiclearn;
using testsupport::brute_separating_word;

namespace {

// Records every word that reaches the underlying machine.
class RecordingOracle : public MembershipOracle {
 public:
  explicit RecordingOracle(MealyMachine m) : m_(std::move(m)) {}
  std::vector<Output> query(const Word& w) override {
    words.push_back(w);
    return m_.run(w);
  }
  std::vector<Word> words;

 private:
  MealyMachine m_;
};

MealyMachine mutated_minimal() {
  // rejected + GET answers "X" instead of staying silent: reachable via any
  // word that sends INIT-CHLO and later GET.
  auto m = reference_minimal();
  auto rejected = m.find_state("rejected").value();
  m.set_transition(rejected, kGet, rejected, "X");
  return m;
}

}  // namespace

TEST_CASE("config validation") {
  RandomEqConfig c;
  CHECK_NOTHROW(c.validate());
  c.num_queries = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RandomEqConfig{};
  c.min_len = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RandomEqConfig{};
  c.max_len = 3;  // < min_len 5
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK_THROWS_AS(RandomWordOracle{c}, std::invalid_argument);
}

TEST_CASE("samples exactly num_queries words within the length bounds") {
  RandomEqConfig cfg;
  cfg.num_queries = 50;
  cfg.min_len = 2;
  cfg.max_len = 4;
  cfg.seed = 9;
  RandomWordOracle oracle(cfg);
  RecordingOracle target(reference_minimal());
  auto cex = oracle.find_counterexample(reference_minimal(), target);
  CHECK_FALSE(cex);  // hypothesis == target
  CHECK(target.words.size() == 50);
  CHECK(oracle.words_tested() == 50);
  std::set<std::size_t> lengths;
  for (const auto& w : target.words) {
    CHECK(w.size() >= 2);
    CHECK(w.size() <= 4);
    lengths.insert(w.size());
    for (const auto& s : w) CHECK(reference_minimal().has_input(s));
  }
  CHECK(lengths.size() == 3);  // all lengths show up over 50 draws
}

TEST_CASE("identical fresh instances reproduce the identical verdict") {
  auto target_machine = mutated_minimal();
  RandomEqConfig cfg;
  cfg.seed = 17;

  RandomWordOracle o1(cfg);
  MachineOracle t1(target_machine);
  auto c1 = o1.find_counterexample(reference_minimal(), t1);

  RandomWordOracle o2(cfg);
  MachineOracle t2(target_machine);
  auto c2 = o2.find_counterexample(reference_minimal(), t2);

  REQUIRE(c1.has_value());
  CHECK(c1 == c2);
  CHECK(target_machine.run(*c1) != reference_minimal().run(*c1));
}

TEST_CASE("the stream rolls: successive rounds try different words") {
  RandomEqConfig cfg;
  cfg.num_queries = 20;
  cfg.seed = 23;
  RandomWordOracle oracle(cfg);
  RecordingOracle target(reference_minimal());
  oracle.find_counterexample(reference_minimal(), target);
  auto first_round = target.words;
  target.words.clear();
  oracle.find_counterexample(reference_minimal(), target);
  CHECK(target.words != first_round);
  CHECK(oracle.words_tested() == 40);
}

TEST_CASE("a planted shallow difference is found with the default budget") {
  RandomEqConfig cfg;
  cfg.seed = 31;
  RandomWordOracle oracle(cfg);
  MachineOracle target(mutated_minimal());
  auto cex = oracle.find_counterexample(reference_minimal(), target);
  REQUIRE(cex.has_value());
  CHECK(cex->size() >= cfg.min_len);
  CHECK(cex->size() <= cfg.max_len);
  CHECK(mutated_minimal().run(*cex) != reference_minimal().run(*cex));
}

TEST_CASE("exhaustive oracle returns the shortest witness or nothing") {
  ExhaustiveOracle eq(reference_minimal());
  MachineOracle unused(reference_minimal());
  CHECK_FALSE(eq.find_counterexample(reference_minimal(), unused));
  auto cex = eq.find_counterexample(mutated_minimal(), unused);
  REQUIRE(cex.has_value());
  CHECK(cex ==
        brute_separating_word(reference_minimal(), mutated_minimal(), 4));
  CHECK(*cex == Word{kInitChlo, kGet});
}
