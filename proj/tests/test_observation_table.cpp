#include <doctest.h>

#include <stdexcept>

#include "quiclearn/eq_oracles.hpp"
#include "quiclearn/observation_table.hpp"
#include "quiclearn/quic_symbols.hpp"
#include "quiclearn/reference_models.hpp"

using namespace quiclearn;

TEST_CASE("query cache memoizes and counts oracle trips") {
  MachineOracle oracle(reference_minimal());
  QueryCache cache(oracle);
  Word w{kInitChlo, kFullChlo};
  bool miss = false;
  auto& first = cache.query(w, &miss);
  CHECK(miss);
  CHECK(first == std::vector<Output>{kOutRej, kOutShlo});
  cache.query(w, &miss);
  CHECK_FALSE(miss);
  CHECK(cache.oracle_queries() == 1);
  cache.clear_memo();
  cache.query(w, &miss);
  CHECK(miss);
  CHECK(cache.oracle_queries() == 2);  // counter survives the clear
}

TEST_CASE("initial table layout") {
  ObservationTable t(minimal_alphabet());
  CHECK(t.prefixes() == std::vector<Word>{{}});
  CHECK(t.boundary() ==
        std::vector<Word>{{kInitChlo}, {kFullChlo}, {kGet}, {kClose}});
  CHECK(t.suffixes() ==
        std::vector<Word>{{kInitChlo}, {kFullChlo}, {kGet}, {kClose}});
  CHECK_THROWS_AS(ObservationTable({}), TableError);
}

TEST_CASE("fill honors the query bound and is idempotent") {
  MachineOracle oracle(reference_minimal());
  QueryCache cache(oracle);
  ObservationTable t(minimal_alphabet());
  auto misses = t.fill(cache);
  auto bound = (t.prefixes().size() + t.boundary().size()) *
               t.suffixes().size();
  CHECK(misses <= bound);
  CHECK(misses > 0);
  CHECK(t.fill(cache) == 0);
}

TEST_CASE("cells are the suffix tail of the joint run") {
  MachineOracle oracle(reference_minimal());
  QueryCache cache(oracle);
  ObservationTable t(minimal_alphabet());
  // run(INIT-CHLO FULL-CHLO) = REJ SHLO; the FULL-CHLO column of prefix
  // INIT-CHLO keeps only the tail.
  CHECK(t.cell({kInitChlo}, {kFullChlo}, cache) ==
        std::vector<Output>{kOutShlo});
  CHECK(t.row({}, cache) ==
        std::vector<Output>{kOutRej, kOutPrst, kOutExp, kOutPrst});
}

TEST_CASE("closedness violation found in declared order") {
  MachineOracle oracle(reference_minimal());
  QueryCache cache(oracle);
  ObservationTable t(minimal_alphabet());
  // The INIT-CHLO row (rejected state) differs from the empty-word row, and
  // INIT-CHLO is the first boundary word.
  auto v = t.closedness_violation(cache);
  REQUIRE(v.has_value());
  CHECK(*v == Word{kInitChlo});
  t.promote(*v);
  CHECK(t.prefixes() == std::vector<Word>{{}, {kInitChlo}});
  // Boundary lost the promoted word and gained its extensions.
  for (const auto& b : t.boundary()) CHECK(b != Word{kInitChlo});
  bool has_ext = false;
  for (const auto& b : t.boundary())
    if (b == Word{kInitChlo, kFullChlo}) has_ext = true;
  CHECK(has_ext);

  CHECK_THROWS_AS(t.promote({kGet, kGet, kGet}), TableError);
}

TEST_CASE("round cap names the unresolved violation") {
  MachineOracle oracle(reference_minimal());
  QueryCache cache(oracle);
  ObservationTable t(minimal_alphabet());
  try {
    t.make_closed_and_consistent(cache, 0);
    FAIL("expected TableError");
  } catch (const TableError& e) {
    CHECK(std::string(e.what()).find(kInitChlo) != std::string::npos);
  }
}

TEST_CASE("stabilized table yields a hypothesis consistent with every cell") {
  MachineOracle oracle(reference_minimal());
  QueryCache cache(oracle);
  ObservationTable t(minimal_alphabet());
  CHECK_THROWS_AS(t.hypothesis(cache), TableError);  // unclosed at first
  t.make_closed_and_consistent(cache, 1000);
  auto hyp = t.hypothesis(cache);
  CHECK(hyp.state_count() >= 2);
  CHECK(hyp.state_count() <= 5);
  CHECK(hyp.state_name(0) == "s0");
  auto check_word = [&](Word p) {
    for (const auto& e : t.suffixes()) {
      Word w = p;
      w.insert(w.end(), e.begin(), e.end());
      auto full = hyp.run(w);
      CHECK(std::vector<Output>(full.end() - e.size(), full.end()) ==
            t.cell(p, e, cache));
    }
  };
  for (const auto& p : t.prefixes()) check_word(p);
  for (const auto& b : t.boundary()) check_word(b);
}

TEST_CASE("consistency violation produces the splitting suffix") {
  // Two states that agree on every single-symbol output but differ one step
  // deeper: s0 -a/0-> s1 -a/0-> s2 -a/1-> s2.
  MealyMachine m({"a"});
  auto s0 = m.add_state("s0");
  auto s1 = m.add_state("s1");
  auto s2 = m.add_state("s2");
  m.set_initial(s0);
  m.set_transition(s0, "a", s1, "0");
  m.set_transition(s1, "a", s2, "0");
  m.set_transition(s2, "a", s2, "1");

  MachineOracle oracle(m);
  QueryCache cache(oracle);
  ObservationTable t({"a"});
  t.promote({ "a" });  // S = {ε, a}: equal rows, inconsistent extensions
  auto v = t.consistency_violation(cache);
  REQUIRE(v.has_value());
  CHECK(v->p1 == Word{});
  CHECK(v->p2 == Word{"a"});
  CHECK(v->input == "a");
  CHECK(v->suffix == Word{"a", "a"});
  t.add_suffix(v->suffix);
  CHECK_FALSE(t.consistency_violation(cache));
  CHECK(t.row({}, cache) != t.row({"a"}, cache));
}

TEST_CASE("add_suffix rejects empties and dedups") {
  ObservationTable t({"a"});
  CHECK_THROWS_AS(t.add_suffix({}), TableError);
  t.add_suffix({"a", "a"});
  t.add_suffix({"a", "a"});
  CHECK(t.suffixes().size() == 2);
}

TEST_CASE("refine rejects non-separating words") {
  MachineOracle oracle(reference_minimal());
  QueryCache cache(oracle);
  ObservationTable t(minimal_alphabet());
  t.make_closed_and_consistent(cache, 1000);
  auto hyp = t.hypothesis(cache);
  // Any table word agrees by construction; pick one.
  Word agreeing{kInitChlo, kInitChlo};
  REQUIRE(hyp.run(agreeing) == cache.query(agreeing));
  CHECK_THROWS_AS(t.refine(cache, agreeing, 1000), CounterexampleRejected);
  CHECK_THROWS_AS(t.refine(cache, {}, 1000), CounterexampleRejected);
  CHECK_THROWS_AS(t.refine(cache, {"BOGUS"}, 1000), std::invalid_argument);
}

TEST_CASE("manual refinement loop converges to the reference") {
  MachineOracle oracle(reference_minimal());
  QueryCache cache(oracle);
  ObservationTable t(minimal_alphabet());
  ExhaustiveOracle eq(reference_minimal());
  t.make_closed_and_consistent(cache, 1000);
  MachineOracle scratch(reference_minimal());
  for (int round = 0; round < 10; ++round) {
    auto hyp = t.hypothesis(cache);
    auto cex = eq.find_counterexample(hyp, scratch);
    if (!cex) {
      CHECK(hyp.state_count() == 5);
      CHECK_FALSE(equivalent(hyp, reference_minimal()));
      return;
    }
    t.refine(cache, *cex, 1000);
    // Prefix-closedness of S after every refinement.
    for (const auto& p : t.prefixes()) {
      if (p.empty()) continue;
      Word parent(p.begin(), p.end() - 1);
      bool found = false;
      for (const auto& q : t.prefixes())
        if (q == parent) found = true;
      CHECK(found);
    }
  }
  FAIL("did not converge in 10 rounds");
}
