#include "quiclearn/reference_models.hpp"

#include "quiclearn/quic_symbols.hpp"

namespace quiclearn {

std::vector<Symbol> minimal_alphabet() {
  return {kInitChlo, kFullChlo, kGet, kClose};
}

std::vector<Symbol> extended_alphabet() {
  return {kInitChlo, kFullChlo, kZeroRttChlo, kGet, kClose};
}

namespace {

MealyMachine build(bool extended) {
  MealyMachine m(extended ? extended_alphabet() : minimal_alphabet());
  auto fresh = m.add_state("fresh");
  auto rejected = m.add_state("rejected");
  auto established = m.add_state("established");
  auto served = m.add_state("served");
  auto closed = m.add_state("closed");
  m.set_initial(fresh);

  m.set_transition(fresh, kInitChlo, rejected, kOutRej);
  m.set_transition(fresh, kFullChlo, fresh, kOutPrst);
  m.set_transition(fresh, kGet, fresh, kOutExp);
  m.set_transition(fresh, kClose, fresh, kOutPrst);

  m.set_transition(rejected, kInitChlo, rejected, kOutRej);
  m.set_transition(rejected, kFullChlo, established, kOutShlo);
  m.set_transition(rejected, kGet, rejected, kOutExp);
  m.set_transition(rejected, kClose, closed, kOutClosed);

  m.set_transition(established, kInitChlo, rejected, kOutRej);
  m.set_transition(established, kFullChlo, established, kOutExp);
  m.set_transition(established, kGet, served, kOutHttp);
  m.set_transition(established, kClose, closed, kOutClosed);

  m.set_transition(served, kInitChlo, rejected, kOutRej);
  m.set_transition(served, kFullChlo, served, kOutExp);
  m.set_transition(served, kGet, served, kOutExp);
  m.set_transition(served, kClose, closed, kOutClosed);

  m.set_transition(closed, kInitChlo, rejected, kOutRej);
  m.set_transition(closed, kFullChlo, closed, kOutPrst);
  m.set_transition(closed, kGet, closed, kOutPrst);
  m.set_transition(closed, kClose, closed, kOutPrst);

  if (extended) {
    // Resuming on a brand-new connection with stored tokens: succeeds from
    // every state that has tokens, including after a close.
    m.set_transition(fresh, kZeroRttChlo, rejected, kOutRej);
    m.set_transition(rejected, kZeroRttChlo, established, kOutShlo);
    m.set_transition(established, kZeroRttChlo, established, kOutShlo);
    m.set_transition(served, kZeroRttChlo, established, kOutShlo);
    m.set_transition(closed, kZeroRttChlo, established, kOutShlo);
  }

  m.validate();
  return m;
}

}  // namespace

MealyMachine reference_minimal() { return build(false); }
MealyMachine reference_extended() { return build(true); }

}  // namespace quiclearn
