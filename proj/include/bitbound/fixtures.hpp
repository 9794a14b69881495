#pragma once

#include "bitbound/machine.hpp"
#include "bitbound/term.hpp"

#include <map>
#include <string>

namespace bitbound::fixtures {

/// A machine together with its number code and validated resource terms.
struct Fixture {
  std::string name;
  MachineSpec spec;
  Nat code;
  WitnessTerms witness;
};

namespace detail {

inline MachineSpec::Entry entry(unsigned next, std::initializer_list<unsigned> writes,
                                std::initializer_list<unsigned> moves) {
  MachineSpec::Entry e;
  e.next_state = next;
  for (unsigned w : writes) e.writes.push_back(static_cast<std::uint8_t>(w));
  for (unsigned m : moves) e.moves.push_back(static_cast<std::uint8_t>(m));
  return e;
}

}  // namespace detail

/// Halts immediately in the accepting (or rejecting) state.
inline Fixture make_halt(bool accepting = true) {
  MachineSpec m;
  m.k = 1; m.l = 0; m.w = 0;
  m.nstates = 2;
  m.accept = 0; m.reject = 1;
  m.start = accepting ? 0 : 1;
  m.table.resize(2);
  return {accepting ? "halt" : "rejector", m, encode_machine(m),
          WitnessTerms::exp(Term::constant(2))};
}

/// Accepts inputs with an odd number of 1-bits. States: 0 even (start),
/// 1 odd, 2 accept, 3 reject; the head walks right over the input.
inline Fixture make_parity() {
  using detail::entry;
  MachineSpec m;
  m.k = 1; m.l = 0; m.w = 0;
  m.nstates = 4;
  m.start = 0; m.accept = 2; m.reject = 3;
  m.table.resize(4);
  m.table[0] = {
      entry(0, {}, {MOVE_R}),  // marker
      entry(3, {}, {MOVE_S}),  // blank: even count, reject
      entry(0, {}, {MOVE_R}),  // 0
      entry(1, {}, {MOVE_R}),  // 1
  };
  m.table[1] = {
      entry(1, {}, {MOVE_R}),
      entry(2, {}, {MOVE_S}),  // blank: odd count, accept
      entry(1, {}, {MOVE_R}),
      entry(0, {}, {MOVE_R}),
  };
  // halts at step |x|+2
  return {"parity", m, encode_machine(m), WitnessTerms::exp(Term::var().length() + 3)};
}

/// Runs exactly `steps` steps and accepts, ignoring the input. Chain states
/// 0..steps-1, then accept; requires steps in 1..7.
inline Fixture make_loop(unsigned steps) {
  using detail::entry;
  MachineSpec m;
  m.k = 1; m.l = 0; m.w = 0;
  m.nstates = steps + 2;
  m.start = 0; m.accept = steps; m.reject = steps + 1;
  m.table.resize(m.nstates);
  for (unsigned i = 0; i < steps; ++i)
    for (unsigned s = 0; s < 4; ++s)
      m.table[i].push_back(entry(i + 1, {}, {MOVE_S}));
  return {"loop" + std::to_string(steps), m, encode_machine(m),
          WitnessTerms::exp(Term::constant(steps + 1))};
}

/// Copies the input to the work tape, then accepts. States: 0 scan,
/// 1 accept, 2 reject.
inline Fixture make_copy() {
  using detail::entry;
  MachineSpec m;
  m.k = 1; m.l = 0; m.w = 1;
  m.nstates = 3;
  m.start = 0; m.accept = 1; m.reject = 2;
  m.table.resize(3);
  m.table[0].resize(16);
  for (unsigned is = 0; is < 4; ++is)
    for (unsigned ws = 0; ws < 4; ++ws) {
      unsigned idx = is + 4 * ws;
      if (is == SYM_MARKER && ws == SYM_MARKER)
        m.table[0][idx] = entry(0, {SYM_MARKER}, {MOVE_R, MOVE_R});
      else if ((is == SYM_ZERO || is == SYM_ONE) && ws == SYM_BLANK)
        m.table[0][idx] = entry(0, {is}, {MOVE_R, MOVE_R});
      else if (is == SYM_BLANK && ws == SYM_BLANK)
        m.table[0][idx] = entry(1, {SYM_BLANK}, {MOVE_S, MOVE_S});
      else  // unreachable combinations
        m.table[0][idx] = entry(2, {ws}, {MOVE_S, MOVE_S});
    }
  return {"copy", m, encode_machine(m), WitnessTerms::exp(Term::var().length() + 3)};
}

/// Writes the input on its oracle tape and accepts iff the oracle holds it.
/// States: 0 scan, 1 query, 2 accept, 3 reject.
inline Fixture make_oracle_probe() {
  using detail::entry;
  MachineSpec m;
  m.k = 1; m.l = 1; m.w = 0;
  m.nstates = 4;
  m.start = 0; m.accept = 2; m.reject = 3;
  m.qstate = 1;
  m.qbranch = {3, 2};  // answer 0 -> reject, answer 1 -> accept
  m.table.resize(4);
  m.table[0].resize(16);
  for (unsigned is = 0; is < 4; ++is)
    for (unsigned os = 0; os < 4; ++os) {
      unsigned idx = is + 4 * os;
      if (is == SYM_MARKER && os == SYM_MARKER)
        m.table[0][idx] = entry(0, {SYM_MARKER}, {MOVE_R, MOVE_R});
      else if ((is == SYM_ZERO || is == SYM_ONE) && os == SYM_BLANK)
        m.table[0][idx] = entry(0, {is}, {MOVE_R, MOVE_R});
      else if (is == SYM_BLANK && os == SYM_BLANK)
        m.table[0][idx] = entry(1, {SYM_BLANK}, {MOVE_S, MOVE_S});
      else
        m.table[0][idx] = entry(3, {os}, {MOVE_S, MOVE_S});
    }
  // query length |x|+1 forces the 2^{|x|+2} bound through |q0|
  return {"oracle-probe", m, encode_machine(m),
          WitnessTerms::exp(Term::constant(4) * Term::constant(1).smash(Term::var()))};
}

/// In-place binary counter: increments a work-tape counter in lockstep with
/// the input head until the carry lands one past the input, then accepts.
/// Space stays logarithmic in the running time. States: 0 inc, 1 rewind,
/// 2 accept, 3 reject.
inline Fixture make_counter() {
  using detail::entry;
  MachineSpec m;
  m.k = 1; m.l = 0; m.w = 1;
  m.nstates = 4;
  m.start = 0; m.accept = 2; m.reject = 3;
  m.table.resize(4);
  m.table[0].resize(16);
  m.table[1].resize(16);
  auto digit = [](unsigned s) { return s == SYM_ZERO || s == SYM_ONE; };
  for (unsigned is = 0; is < 4; ++is)
    for (unsigned ws = 0; ws < 4; ++ws) {
      unsigned idx = is + 4 * ws;
      // state 0: propagate the carry right, write the final 1, or accept
      if (is == SYM_MARKER && ws == SYM_MARKER)
        m.table[0][idx] = entry(0, {SYM_MARKER}, {MOVE_R, MOVE_R});
      else if (digit(is) && ws == SYM_ONE)
        m.table[0][idx] = entry(0, {SYM_ZERO}, {MOVE_R, MOVE_R});
      else if (digit(is) && (ws == SYM_ZERO || ws == SYM_BLANK))
        m.table[0][idx] = entry(1, {SYM_ONE}, {MOVE_L, MOVE_L});
      else if (is == SYM_BLANK && (ws == SYM_ZERO || ws == SYM_BLANK))
        m.table[0][idx] = entry(2, {SYM_ONE}, {MOVE_S, MOVE_S});
      else
        m.table[0][idx] = entry(3, {ws}, {MOVE_S, MOVE_S});
      // state 1: move both heads back to the markers
      if (is == SYM_MARKER && ws == SYM_MARKER)
        m.table[1][idx] = entry(0, {SYM_MARKER}, {MOVE_R, MOVE_R});
      else if (is != SYM_MARKER && ws != SYM_MARKER)
        m.table[1][idx] = entry(1, {ws}, {MOVE_L, MOVE_L});
      else
        m.table[1][idx] = entry(3, {ws == SYM_MARKER ? SYM_MARKER : ws}, {MOVE_S, MOVE_S});
    }
  // ~2^{|x|} increments of amortised constant carry length; the bound below
  // dominates with room (validated by check_witness over the sample grid).
  Term tm = Term::constant(16) * Term::constant(1).smash(Term::var()) * (Term::var().length() + 2);
  return {"counter", m, encode_machine(m), WitnessTerms::pspace(std::move(tm))};
}

/// The standard corpus, by name.
inline const std::map<std::string, Fixture>& all() {
  static const std::map<std::string, Fixture> reg = [] {
    std::map<std::string, Fixture> r;
    for (Fixture f : {make_halt(true), make_halt(false), make_parity(), make_loop(2),
                      make_loop(4), make_copy(), make_oracle_probe(), make_counter()})
      r.emplace(f.name, std::move(f));
    return r;
  }();
  return reg;
}

inline const Fixture& get(const std::string& name) {
  auto it = all().find(name);
  if (it == all().end()) throw std::invalid_argument("unknown fixture: " + name);
  return it->second;
}

}  // namespace bitbound::fixtures
