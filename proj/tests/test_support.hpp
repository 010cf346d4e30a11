#pragma once

// Brute-force oracles and generators shared by the unit and acceptance
// suites. Everything here is deliberately dumb: enumeration instead of BFS,
// pairwise word probing instead of partition refinement, so the clever
// library code is checked against an independent route.

#include <cstdint>
#include <optional>
#include <vector>

#include "quiclearn/mealy.hpp"
#include "quiclearn/rng.hpp"

namespace quiclearn::testsupport {

// All nonempty words up to max_len, shorter first, alphabet order within a
// length (i.e. length-then-lexicographic by declared symbol order).
inline std::vector<Word> all_words(const std::vector<Symbol>& alphabet,
                                   std::size_t max_len) {
  std::vector<Word> out;
  std::vector<Word> current{Word{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const auto& w : current) {
      for (const auto& a : alphabet) {
        Word e = w;
        e.push_back(a);
        next.push_back(e);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    current = std::move(next);
  }
  return out;
}

// First word, in all_words order, on which the machines disagree.
inline std::optional<Word> brute_separating_word(const MealyMachine& a,
                                                 const MealyMachine& b,
                                                 std::size_t max_len) {
  for (const auto& w : all_words(a.inputs(), max_len))
    if (a.run(w) != b.run(w)) return w;
  return std::nullopt;
}

// Number of pairwise-distinguishable classes among reachable states, probing
// every word up to max_len from each state.
inline std::size_t brute_state_classes(const MealyMachine& m,
                                       std::size_t max_len) {
  std::vector<MealyMachine::StateId> reach;
  {
    std::vector<bool> seen(m.state_count(), false);
    std::vector<MealyMachine::StateId> queue{m.initial_state()};
    seen[m.initial_state()] = true;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      auto s = queue[h];
      reach.push_back(s);
      for (std::size_t i = 0; i < m.inputs().size(); ++i) {
        auto t = m.next_state(s, i);
        if (!seen[t]) {
          seen[t] = true;
          queue.push_back(t);
        }
      }
    }
  }
  auto words = all_words(m.inputs(), max_len);
  auto same = [&](MealyMachine::StateId x, MealyMachine::StateId y) {
    for (const auto& w : words)
      if (m.run_from(x, w) != m.run_from(y, w)) return false;
    return true;
  };
  std::vector<MealyMachine::StateId> classes;
  for (auto s : reach) {
    bool found = false;
    for (auto c : classes)
      if (same(s, c)) {
        found = true;
        break;
      }
    if (!found) classes.push_back(s);
  }
  return classes.size();
}

// Random input-complete machine: n_states states, n_inputs inputs a0..,
// outputs drawn from o0..o{n_outputs-1}. May contain unreachable states.
inline MealyMachine random_machine(std::mt19937_64& rng, std::size_t n_states,
                                   std::size_t n_inputs,
                                   std::size_t n_outputs) {
  std::vector<Symbol> inputs;
  for (std::size_t i = 0; i < n_inputs; ++i)
    inputs.push_back("a" + std::to_string(i));
  MealyMachine m(inputs);
  for (std::size_t s = 0; s < n_states; ++s)
    m.add_state("q" + std::to_string(s));
  for (std::size_t s = 0; s < n_states; ++s)
    for (const auto& a : inputs)
      m.set_transition(s, a, uniform_below(rng, n_states),
                       "o" + std::to_string(uniform_below(rng, n_outputs)));
  m.set_initial(0);
  m.validate();
  return m;
}

}  // namespace quiclearn::testsupport
