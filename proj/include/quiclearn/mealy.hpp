#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace quiclearn {

using Symbol = std::string;
using Output = std::string;
using Word = std::vector<Symbol>;

// Space-joined rendering of an input word, e.g. "INIT-CHLO FULL-CHLO GET".
std::string to_string(const Word& w);

// Deterministic, input-complete Mealy machine. States are dense indices so the
// learner and the minimizer can use flat tables; names are kept for
// serialization. The input alphabet is ordered: every algorithm that iterates
// over inputs (BFS for separating words, hypothesis construction, DOT output)
// follows the declared order, which is what makes results reproducible.
class MealyMachine {
 public:
  using StateId = std::size_t;
  static constexpr StateId kNoState = static_cast<StateId>(-1);

  explicit MealyMachine(std::vector<Symbol> inputs);

  StateId add_state(std::string name);
  void set_initial(StateId s);
  void set_transition(StateId from, const Symbol& input, StateId to,
                      Output output);

  // Throws std::invalid_argument if any (state, input) pair has no transition
  // or no initial state was set. All other accessors assume a valid machine.
  void validate() const;

  std::size_t state_count() const { return names_.size(); }
  StateId initial_state() const;
  const std::string& state_name(StateId s) const { return names_.at(s); }
  std::optional<StateId> find_state(std::string_view name) const;
  const std::vector<Symbol>& inputs() const { return inputs_; }
  bool has_input(const Symbol& a) const;
  std::size_t input_index(const Symbol& a) const;  // throws if unknown
  // Distinct outputs in first-use order (row-major over states, then inputs).
  std::vector<Output> outputs() const;

  StateId next_state(StateId s, std::size_t input_idx) const;
  const Output& output(StateId s, std::size_t input_idx) const;

  // One transition; throws on unknown input symbol.
  std::pair<StateId, Output> step(StateId s, const Symbol& a) const;

  // Runs w from the initial state / from s; one output per input symbol.
  std::vector<Output> run(const Word& w) const;
  std::vector<Output> run_from(StateId s, const Word& w) const;

 private:
  std::size_t cell(StateId s, std::size_t i) const {
    return s * inputs_.size() + i;
  }

  std::vector<Symbol> inputs_;
  std::vector<std::string> names_;
  std::optional<StateId> initial_;
  std::vector<StateId> delta_;   // state-major, kNoState when unset
  std::vector<Output> lambda_;
};

// Shortest input word on which the two machines produce different outputs, or
// nullopt if none exists. Ties between equal-length words are broken by the
// declared input order of `a`. Both machines must be valid and have the same
// input alphabet (as a set); otherwise throws std::invalid_argument.
std::optional<Word> equivalent(const MealyMachine& a, const MealyMachine& b);

// Minimum-state machine equivalent to m: unreachable states dropped, then
// output-equivalent states merged by partition refinement. Each surviving
// state keeps the name of its lowest-numbered representative.
MealyMachine minimize(const MealyMachine& m);

}  // namespace quiclearn
