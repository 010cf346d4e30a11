#include "quiclearn/mealy.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace quiclearn {

std::string to_string(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += w[i];
  }
  return s;
}

MealyMachine::MealyMachine(std::vector<Symbol> inputs)
    : inputs_(std::move(inputs)) {
  std::set<Symbol> seen;
  for (const auto& a : inputs_) {
    if (!seen.insert(a).second)
      throw std::invalid_argument("duplicate input symbol: " + a);
  }
}

MealyMachine::StateId MealyMachine::add_state(std::string name) {
  names_.push_back(std::move(name));
  delta_.resize(names_.size() * inputs_.size(), kNoState);
  lambda_.resize(names_.size() * inputs_.size());
  return names_.size() - 1;
}

void MealyMachine::set_initial(StateId s) {
  if (s >= names_.size()) throw std::invalid_argument("initial state out of range");
  initial_ = s;
}

void MealyMachine::set_transition(StateId from, const Symbol& input, StateId to,
                                  Output output) {
  if (from >= names_.size() || to >= names_.size())
    throw std::invalid_argument("transition endpoint out of range");
  std::size_t i = input_index(input);
  delta_[cell(from, i)] = to;
  lambda_[cell(from, i)] = std::move(output);
}

void MealyMachine::validate() const {
  if (names_.empty()) throw std::invalid_argument("machine has no states");
  if (!initial_) throw std::invalid_argument("no initial state set");
  for (StateId s = 0; s < names_.size(); ++s) {
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      if (delta_[cell(s, i)] == kNoState)
        throw std::invalid_argument("missing transition from state '" +
                                    names_[s] + "' on input '" + inputs_[i] +
                                    "'");
    }
  }
}

MealyMachine::StateId MealyMachine::initial_state() const {
  if (!initial_) throw std::invalid_argument("no initial state set");
  return *initial_;
}

std::optional<MealyMachine::StateId> MealyMachine::find_state(
    std::string_view name) const {
  for (StateId s = 0; s < names_.size(); ++s)
    if (names_[s] == name) return s;
  return std::nullopt;
}

bool MealyMachine::has_input(const Symbol& a) const {
  return std::find(inputs_.begin(), inputs_.end(), a) != inputs_.end();
}

std::size_t MealyMachine::input_index(const Symbol& a) const {
  auto it = std::find(inputs_.begin(), inputs_.end(), a);
  if (it == inputs_.end())
    throw std::invalid_argument("unknown input symbol: " + a);
  return static_cast<std::size_t>(it - inputs_.begin());
}

std::vector<Output> MealyMachine::outputs() const {
  std::vector<Output> out;
  std::set<Output> seen;
  for (StateId s = 0; s < names_.size(); ++s)
    for (std::size_t i = 0; i < inputs_.size(); ++i)
      if (seen.insert(lambda_[cell(s, i)]).second)
        out.push_back(lambda_[cell(s, i)]);
  return out;
}

MealyMachine::StateId MealyMachine::next_state(StateId s,
                                               std::size_t input_idx) const {
  return delta_.at(s * inputs_.size() + input_idx);
}

const Output& MealyMachine::output(StateId s, std::size_t input_idx) const {
  return lambda_.at(s * inputs_.size() + input_idx);
}

std::pair<MealyMachine::StateId, Output> MealyMachine::step(
    StateId s, const Symbol& a) const {
  std::size_t i = input_index(a);
  return {next_state(s, i), output(s, i)};
}

std::vector<Output> MealyMachine::run(const Word& w) const {
  return run_from(initial_state(), w);
}

std::vector<Output> MealyMachine::run_from(StateId s, const Word& w) const {
  std::vector<Output> out;
  out.reserve(w.size());
  for (const auto& a : w) {
    auto [next, o] = step(s, a);
    out.push_back(o);
    s = next;
  }
  return out;
}

std::optional<Word> equivalent(const MealyMachine& a, const MealyMachine& b) {
  a.validate();
  b.validate();
  {
    std::set<Symbol> sa(a.inputs().begin(), a.inputs().end());
    std::set<Symbol> sb(b.inputs().begin(), b.inputs().end());
    if (sa != sb)
      throw std::invalid_argument("input alphabets differ");
  }
  // b's index for each of a's inputs, so the BFS walks both machines in a's
  // declared order (that order is the tie-breaker for the witness).
  std::vector<std::size_t> bidx(a.inputs().size());
  for (std::size_t i = 0; i < a.inputs().size(); ++i)
    bidx[i] = b.input_index(a.inputs()[i]);

  const std::size_t nb = b.state_count();
  auto pair_id = [nb](MealyMachine::StateId sa, MealyMachine::StateId sb) {
    return sa * nb + sb;
  };
  struct Visit {
    std::size_t parent;      // index into visit order, kNone for root
    std::size_t input;       // input index taken to get here
  };
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> seen(a.state_count() * nb, kNone);
  std::vector<Visit> order;
  std::vector<std::pair<MealyMachine::StateId, MealyMachine::StateId>> states;

  auto push = [&](MealyMachine::StateId sa, MealyMachine::StateId sb,
                  std::size_t parent, std::size_t input) {
    if (seen[pair_id(sa, sb)] != kNone) return;
    seen[pair_id(sa, sb)] = order.size();
    order.push_back({parent, input});
    states.push_back({sa, sb});
  };

  auto word_to = [&](std::size_t node, std::size_t last_input) {
    Word w;
    for (std::size_t n = node; n != kNone; n = order[n].parent)
      if (order[n].parent != kNone || order[n].input != kNone)
        w.push_back(a.inputs()[order[n].input]);
    std::reverse(w.begin(), w.end());
    w.push_back(a.inputs()[last_input]);
    return w;
  };

  push(a.initial_state(), b.initial_state(), kNone, kNone);
  for (std::size_t head = 0; head < order.size(); ++head) {
    auto [sa, sb] = states[head];
    for (std::size_t i = 0; i < a.inputs().size(); ++i) {
      if (a.output(sa, i) != b.output(sb, bidx[i]))
        return word_to(head, i);
      push(a.next_state(sa, i), b.next_state(sb, bidx[i]), head, i);
    }
  }
  return std::nullopt;
}

MealyMachine minimize(const MealyMachine& m) {
  m.validate();
  const std::size_t k = m.inputs().size();

  // Reachable states, then refine the partition until transition targets agree
  // blockwise. Initial partition groups states by their full output row.
  std::vector<MealyMachine::StateId> reach;
  {
    std::vector<bool> seen(m.state_count(), false);
    std::deque<MealyMachine::StateId> q{m.initial_state()};
    seen[m.initial_state()] = true;
    while (!q.empty()) {
      auto s = q.front();
      q.pop_front();
      reach.push_back(s);
      for (std::size_t i = 0; i < k; ++i) {
        auto t = m.next_state(s, i);
        if (!seen[t]) {
          seen[t] = true;
          q.push_back(t);
        }
      }
    }
    std::sort(reach.begin(), reach.end());
  }

  std::vector<std::size_t> block(m.state_count(), 0);
  std::size_t nblocks;
  {
    std::map<std::vector<Output>, std::size_t> by_row;
    for (auto s : reach) {
      std::vector<Output> row;
      for (std::size_t i = 0; i < k; ++i) row.push_back(m.output(s, i));
      block[s] = by_row.emplace(std::move(row), by_row.size()).first->second;
    }
    nblocks = by_row.size();
  }
  for (;;) {
    std::map<std::vector<std::size_t>, std::size_t> by_sig;
    std::vector<std::size_t> next(block.size(), 0);
    for (auto s : reach) {
      std::vector<std::size_t> sig{block[s]};
      for (std::size_t i = 0; i < k; ++i) sig.push_back(block[m.next_state(s, i)]);
      next[s] = by_sig.emplace(std::move(sig), by_sig.size()).first->second;
    }
    if (by_sig.size() == nblocks) break;
    nblocks = by_sig.size();
    block = std::move(next);
  }

  // Representative of each block = lowest original state id; new states are
  // ordered by representative so minimizing twice gives the same machine.
  std::vector<MealyMachine::StateId> rep;
  {
    std::vector<MealyMachine::StateId> first(nblocks, MealyMachine::kNoState);
    for (auto s : reach)
      if (first[block[s]] == MealyMachine::kNoState) first[block[s]] = s;
    rep = first;
    std::sort(rep.begin(), rep.end());
  }
  std::vector<std::size_t> new_id(nblocks, 0);
  MealyMachine out(m.inputs());
  for (std::size_t n = 0; n < rep.size(); ++n) {
    new_id[block[rep[n]]] = out.add_state(m.state_name(rep[n]));
  }
  for (auto r : rep) {
    for (std::size_t i = 0; i < k; ++i) {
      out.set_transition(new_id[block[r]], m.inputs()[i],
                         new_id[block[m.next_state(r, i)]], m.output(r, i));
    }
  }
  out.set_initial(new_id[block[m.initial_state()]]);
  out.validate();
  return out;
}

}  // namespace quiclearn
