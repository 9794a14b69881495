#pragma once

#include "bitbound/builder.hpp"
#include "bitbound/machine.hpp"
#include "bitbound/trace.hpp"

namespace bitbound {

/// Gate-level synthesis of the step predicates and of whole-computation
/// membership, by direct construction of the decode / transition-lookup /
/// pack pipeline. Oracle machines are out of range here.
namespace synth {

namespace detail {

struct DecodedWires {
  Builder::Word state;                                  // the raw state bits
  std::vector<std::vector<Builder::Word>> sym;          // [tape][cell] fields
  std::vector<std::vector<Builder::Wire>> head_at;      // [tape][cell] one-hot
};

/// Reads a configuration from an X block whose bit u means u ∈ X. Mirrors
/// the canonical decode: only pairs <i,j> with i <= m, j < |M| are read, and
/// the head sits one left of the first set position bit.
inline DecodedWires decode_config_block(Builder& b, const MachineSpec& spec,
                                        std::uint64_t m, std::uint64_t code_len,
                                        std::uint32_t block) {
  const unsigned SB = spec.sym_bits();
  const unsigned T = spec.tapes();
  DecodedWires d;
  d.state.resize(code_len);
  for (std::uint64_t j = 0; j < code_len; ++j)
    d.state[j] = b.input(block, static_cast<std::uint32_t>(pair_u64(m, j)));
  d.sym.assign(T, {});
  d.head_at.assign(T, {});
  for (unsigned t = 0; t < T; ++t) {
    d.sym[t].resize(m);
    std::vector<Builder::Wire> pos(m);
    for (std::uint64_t i = 0; i < m; ++i) {
      Builder::Word w(SB);
      for (unsigned bit = 0; bit < SB; ++bit)
        w[bit] = b.input(block, static_cast<std::uint32_t>(pair_u64(i, t * (SB + 1) + bit)));
      d.sym[t][i] = std::move(w);
      pos[i] = b.input(block, static_cast<std::uint32_t>(pair_u64(i, t * (SB + 1) + SB)));
    }
    d.head_at[t].resize(m);
    Builder::Wire clear = b.one();  // no position bit seen in 1..p
    for (std::uint64_t p = 0; p < m; ++p) {
      Builder::Wire next_pos = p + 1 < m ? pos[p + 1] : b.one();
      d.head_at[t][p] = b.land(clear, next_pos);
      if (p + 1 < m) clear = b.land(clear, b.lnot(pos[p + 1]));
    }
  }
  return d;
}

/// Everything the step decides: the fail wire and the successor wires.
struct StepWires {
  Builder::Wire fail;
  Builder::Word new_state;                              // SW bits
  std::vector<std::vector<Builder::Word>> new_sym;      // [tape][cell]
  std::vector<std::vector<Builder::Wire>> new_head_at;  // [tape][cell]
};

/// The transition logic on decoded wires. `check_bounds` adds the full
/// fail conditions (garbage-faithful); without it only the transition
/// semantics is produced, which agrees with real runs that never fail.
inline StepWires step_wires(Builder& b, const StepContext& ctx, const DecodedWires& d,
                            bool check_bounds) {
  const MachineSpec& spec = ctx.spec;
  if (spec.l != 0) throw std::invalid_argument("step synthesis: oracle machines unsupported");
  const unsigned SB = spec.sym_bits();
  const unsigned T = spec.tapes();
  const unsigned SW = spec.state_bits();
  const std::uint64_t m = d.sym[0].size();

  StepWires out;
  Builder::Wire fail = b.zero();

  // state one-hots over the raw bits; anything else is "state off"
  std::vector<Builder::Wire> st(spec.nstates);
  for (unsigned s = 0; s < spec.nstates; ++s) st[s] = b.eq_const(d.state, s);
  if (check_bounds) fail = b.lor(fail, b.lnot(b.any(st)));

  // scanned symbols
  std::vector<Builder::Word> scanned(T);
  for (unsigned t = 0; t < T; ++t) {
    Builder::Word w(SB, b.zero());
    for (std::uint64_t p = 0; p < m; ++p)
      for (unsigned bit = 0; bit < SB; ++bit)
        w[bit] = b.lor(w[bit], b.land(d.head_at[t][p], d.sym[t][p][bit]));
    scanned[t] = std::move(w);
  }
  std::vector<std::vector<Builder::Wire>> sym_is(T);
  for (unsigned t = 0; t < T; ++t) {
    sym_is[t].resize(spec.nsym);
    for (unsigned s = 0; s < spec.nsym; ++s) sym_is[t][s] = b.eq_const(scanned[t], s);
  }

  std::uint64_t head_bound_of[8];
  for (unsigned t = 0; t < T; ++t) {
    Nat bound = t < spec.k ? input_length(ctx.inputs) + 2
                           : (t < spec.k + spec.l ? Nat(len(ctx.q)) : ctx.s);
    head_bound_of[t] = bound > Nat(m) ? m : to_u64(bound);
  }
  if (check_bounds) {
    for (unsigned t = 0; t < T; ++t) {
      if (spec.nsym < (1u << SB)) fail = b.lor(fail, b.lnot(b.any(sym_is[t])));
      if (t < spec.k) continue;  // input heads are not checked before the move
      for (std::uint64_t p = head_bound_of[t]; p < m; ++p)
        fail = b.lor(fail, d.head_at[t][p]);
    }
  }

  // activation terms: one per (state with rows, symbol tuple)
  struct Act {
    Builder::Wire w;
    const MachineSpec::Entry* e;
  };
  std::vector<Act> acts;
  std::vector<std::uint8_t> syms(T);
  for (unsigned s = 0; s < spec.nstates; ++s) {
    if (!spec.has_row(s)) continue;
    for (std::uint64_t idx = 0; idx < spec.tuple_count(); ++idx) {
      std::uint64_t rest = idx;
      Builder::Wire act = st[s];
      for (unsigned t = 0; t < T; ++t) {
        syms[t] = static_cast<std::uint8_t>(rest % spec.nsym);
        rest /= spec.nsym;
        act = b.land(act, sym_is[t][syms[t]]);
      }
      if (act != b.zero()) acts.push_back({act, &spec.table[s][idx]});
    }
  }
  Builder::Wire halting = b.lor(st[spec.accept], st[spec.reject]);

  // new state
  out.new_state.assign(SW, b.zero());
  for (unsigned j = 0; j < SW; ++j) {
    Builder::Wire w = b.zero();
    for (const Act& a : acts)
      if ((a.e->next_state >> j) & 1) w = b.lor(w, a.w);
    for (unsigned s : {spec.accept, spec.reject})
      if ((s >> j) & 1) w = b.lor(w, st[s]);
    out.new_state[j] = w;
  }

  // per-tape writes (input tapes rewrite the scanned symbol)
  std::vector<Builder::Word> write(T);
  for (unsigned t = 0; t < T; ++t) {
    if (t < spec.k) { write[t] = scanned[t]; continue; }
    Builder::Word w(SB, b.zero());
    for (const Act& a : acts) {
      std::uint8_t ws = a.e->writes[t - spec.k];
      for (unsigned bit = 0; bit < SB; ++bit)
        if ((ws >> bit) & 1) w[bit] = b.lor(w[bit], a.w);
    }
    for (unsigned bit = 0; bit < SB; ++bit)
      w[bit] = b.lor(w[bit], b.land(halting, scanned[t][bit]));
    write[t] = std::move(w);
  }

  // new head positions
  out.new_head_at.assign(T, std::vector<Builder::Wire>(m, 0));
  for (unsigned t = 0; t < T; ++t) {
    for (std::uint64_t p = 0; p < m; ++p) {
      Builder::Wire w = b.land(halting, d.head_at[t][p]);
      for (const Act& a : acts) {
        std::uint8_t mv = a.e->moves[t];
        if (mv == MOVE_S) w = b.lor(w, b.land(a.w, d.head_at[t][p]));
        else if (mv == MOVE_L && p + 1 < m) w = b.lor(w, b.land(a.w, d.head_at[t][p + 1]));
        else if (mv == MOVE_R && p > 0) w = b.lor(w, b.land(a.w, d.head_at[t][p - 1]));
      }
      out.new_head_at[t][p] = w;
    }
    if (check_bounds) {
      // moving left off the marker, landing at or past the tape's bound, or
      // moving right off the last represented cell
      for (const Act& a : acts) {
        if (a.e->moves[t] == MOVE_L) fail = b.lor(fail, b.land(a.w, d.head_at[t][0]));
        if (a.e->moves[t] == MOVE_R) fail = b.lor(fail, b.land(a.w, d.head_at[t][m - 1]));
      }
      for (std::uint64_t p = head_bound_of[t]; p < m; ++p)
        fail = b.lor(fail, out.new_head_at[t][p]);
    }
  }

  // new cell contents
  out.new_sym.assign(T, {});
  for (unsigned t = 0; t < T; ++t) {
    out.new_sym[t].resize(m);
    for (std::uint64_t i = 0; i < m; ++i) {
      if (t < spec.k) { out.new_sym[t][i] = d.sym[t][i]; continue; }
      Builder::Word w(SB);
      for (unsigned bit = 0; bit < SB; ++bit)
        w[bit] = b.mux(d.head_at[t][i], write[t][bit], d.sym[t][i][bit]);
      out.new_sym[t][i] = std::move(w);
    }
  }

  out.fail = fail;
  return out;
}

/// Packed membership bit <i,j> of a successor, mirroring the output lines:
/// 0 past the state slot, state bits at the slot, field bits below it.
inline Builder::Wire member_bit(Builder& b, const MachineSpec& spec, const StepWires& sw,
                                std::uint64_t m, std::uint64_t i, std::uint64_t j) {
  const unsigned SB = spec.sym_bits();
  if (i > m) return b.zero();
  if (i == m) return j < sw.new_state.size() ? sw.new_state[j] : b.zero();
  unsigned t = static_cast<unsigned>(j / (SB + 1));
  unsigned o = static_cast<unsigned>(j % (SB + 1));
  if (t >= spec.tapes()) return b.zero();
  if (o < SB) return sw.new_sym[t][i][o];
  Builder::Wire past = b.zero();  // head strictly left of i
  for (std::uint64_t p = 0; p < i; ++p) past = b.lor(past, sw.new_head_at[t][p]);
  return past;
}

}  // namespace detail

enum class StepPredicate { Next, Fail, StartMember };

/// Compiles Next / Fail / Start for a fixed context into a circuit. Blocks:
/// Next (X: bd0 bits, v: value bits), Fail (X), StartMember (v). The result
/// agrees with the step predicates on every input, garbage included.
inline Circuit compile_step_predicate(const StepContext& ctx, StepPredicate kind) {
  Builder b;
  const std::uint64_t s0 = to_u64(ctx.bd0_value());
  const std::uint64_t m = ctx.m;
  const unsigned vbits = static_cast<unsigned>(len(ctx.bd0_value())) + 2;

  if (kind == StepPredicate::StartMember) {
    Builder::Word v = b.word_input(0, vbits);
    Builder::Wire out = b.zero();
    for (const Nat& e : start_config(ctx)) out = b.lor(out, b.eq_const(v, e));
    return b.finish({vbits}, out);
  }

  auto d = detail::decode_config_block(b, ctx.spec, m, ctx.code_len, 0);
  auto sw = detail::step_wires(b, ctx, d, true);
  if (kind == StepPredicate::Fail)
    return b.finish({static_cast<std::uint32_t>(s0)}, sw.fail);

  Builder::Word v = b.word_input(1, vbits);
  Builder::Wire out = b.zero();
  const unsigned SB = ctx.spec.sym_bits();
  for (std::uint64_t i = 0; i <= m; ++i) {
    std::uint64_t jmax = i == m ? ctx.spec.state_bits() : ctx.spec.tapes() * (SB + 1);
    for (std::uint64_t j = 0; j < jmax; ++j) {
      Builder::Wire bitw = detail::member_bit(b, ctx.spec, sw, m, i, j);
      if (bitw == b.zero()) continue;
      out = b.lor(out, b.land(b.eq_const(v, pair_u64(i, j)), bitw));
    }
  }
  out = b.land(out, b.lnot(sw.fail));
  return b.finish({static_cast<std::uint32_t>(s0), vbits}, out);
}

/// Truth-table fallback: the unique circuit description of a small function.
inline Circuit compile_truth_table(const NatSet& accepted, unsigned width) {
  if (width > 16) throw std::length_error("compile_truth_table: width beyond the guard");
  Builder b;
  Builder::Word v = b.word_input(0, width);
  Builder::Wire out = b.zero();
  for (const Nat& e : accepted) {
    if (len(e) > width) throw std::invalid_argument("truth table entry wider than the input");
    out = b.lor(out, b.eq_const(v, e));
  }
  return b.finish({width}, out);
}

/// Per-length data of a machine whose bounds are determined by the input
/// length: simulation widths and bounds for each |x| = L <= n.
struct LengthGrid {
  MachineSpec spec;
  Nat code;
  WitnessTerms witness;
  unsigned n = 2;
  std::vector<std::uint64_t> t_L, m_L;  // per length L = 0..n
  std::vector<Nat> bd_L;
  std::uint64_t t_max = 0, m_max = 0;
  Nat bd_max;

  static LengthGrid make(const MachineSpec& spec, const Nat& code, const WitnessTerms& wt,
                         unsigned n) {
    if (spec.l != 0 || spec.k != 1)
      throw std::invalid_argument("length grid: single-input machines without oracles only");
    LengthGrid g{spec, code, wt, n, {}, {}, {}, 0, 0, 0};
    for (unsigned L = 0; L <= n; ++L) {
      Nat rep = L == 0 ? Nat(0) : pow2(L) - 1;
      Nat alt = L == 0 ? Nat(0) : pow2(L - 1);
      if (wt.time_bound1(rep) != wt.time_bound1(alt) ||
          wt.space_bound1(rep) != wt.space_bound1(alt) ||
          wt.query_bound1(rep) != wt.query_bound1(alt))
        throw std::invalid_argument("length grid: bounds must depend on the length only");
      Nat t = wt.time_bound1(rep), s = wt.space_bound1(rep), q = wt.query_bound1(rep);
      std::uint64_t t_u = to_u64(t);
      std::uint64_t m_u = config_width({rep}, s, q);
      g.t_L.push_back(t_u);
      g.m_L.push_back(m_u);
      g.bd_L.push_back(bd(code, {rep}, t, s, q));
      g.t_max = std::max(g.t_max, t_u);
      g.m_max = std::max(g.m_max, m_u);
      if (g.bd_L.back() > g.bd_max) g.bd_max = g.bd_L.back();
    }
    return g;
  }

  StepContext context_for(const Nat& x) const {
    return StepContext::make(code, {x}, witness.space_bound1(x), witness.query_bound1(x));
  }
};

/// The layered construction shared by whole-computation membership and
/// acceptance circuits: configurations of every step up to the time bound,
/// as wires over the input block.
class Tableau {
 public:
  Tableau(const LengthGrid& grid) : g_(grid) {
    const MachineSpec& spec = g_.spec;
    const unsigned SB = spec.sym_bits();
    const unsigned T = spec.tapes();
    x_ = b_.word_input(0, g_.n);

    // len_is_[L] = [|x| = L]
    len_is_.resize(g_.n + 1);
    for (unsigned L = 0; L <= g_.n; ++L) {
      Builder::Wire w = b_.one();
      for (unsigned j = 0; j < g_.n; ++j) {
        if (j + 1 == L) w = b_.land(w, x_[j]);
        else if (j + 1 > L) w = b_.land(w, b_.lnot(x_[j]));
      }
      len_is_[L] = w;
    }

    // start configuration wires at full width
    detail::DecodedWires cfg;
    cfg.state = b_.word_const(spec.start, spec.state_bits());
    cfg.sym.assign(T, std::vector<Builder::Word>(g_.m_max));
    cfg.head_at.assign(T, std::vector<Builder::Wire>(g_.m_max, b_.zero()));
    for (unsigned t = 0; t < T; ++t) {
      cfg.head_at[t][0] = b_.one();
      for (std::uint64_t i = 0; i < g_.m_max; ++i) {
        if (i == 0) { cfg.sym[t][i] = b_.word_const(SYM_MARKER, SB); continue; }
        if (t == 0 && i <= g_.n) {
          // input cell i holds the digit of bit i-1 while in range
          Builder::Wire in_range = b_.zero();
          for (unsigned j = static_cast<unsigned>(i) - 1; j < g_.n; ++j)
            in_range = b_.lor(in_range, x_[j]);
          Builder::Word w(SB, b_.zero());
          w[0] = b_.lor(x_[i - 1], b_.lnot(in_range));  // blank=01, 0=10, 1=11
          w[1] = in_range;
          cfg.sym[t][i] = std::move(w);
        } else {
          cfg.sym[t][i] = b_.word_const(SYM_BLANK, SB);
        }
      }
    }
    layers_.push_back(std::move(cfg));

    // transition-only steps; real runs of witnessed machines never fail
    StepContext base = g_.context_for(pow2(g_.n) - 1);
    for (std::uint64_t u = 1; u <= g_.t_max; ++u) {
      auto sw = detail::step_wires(b_, base, layers_.back(), false);
      detail::DecodedWires next;
      next.state = sw.new_state;
      next.sym = std::move(sw.new_sym);
      next.head_at = std::move(sw.new_head_at);
      layers_.push_back(std::move(next));
    }
  }

  Builder& builder() { return b_; }
  const Builder::Word& x_word() const { return x_; }
  std::uint64_t value_bits() const { return len(g_.bd_max) + 1; }

  /// [v ∈ Y(x)] for the full computation Y of length t_M(x): block 0 is x,
  /// block 1 is v.
  Circuit membership_circuit() {
    const MachineSpec& spec = g_.spec;
    const unsigned SB = spec.sym_bits();
    const unsigned vbits = static_cast<unsigned>(value_bits());
    Builder::Word v = b_.word_input(1, vbits);

    Circuit out_c;
    Builder::Wire out = b_.zero();
    for (std::uint64_t u = 0; u <= g_.t_max; ++u) {
      std::uint64_t imax = 0;
      for (unsigned L = 0; L <= g_.n; ++L)
        if (u <= g_.t_L[L]) imax = std::max(imax, g_.m_L[L]);
      for (std::uint64_t i = 0; i <= imax; ++i) {
        std::uint64_t jmax = std::max<std::uint64_t>(spec.tapes() * (SB + 1), spec.state_bits());
        for (std::uint64_t j = 0; j < jmax; ++j) {
          // membership of <u,<i,j>> for each admitting length
          Builder::Wire w = b_.zero();
          for (unsigned L = 0; L <= g_.n; ++L) {
            if (u > g_.t_L[L] || i > g_.m_L[L]) continue;
            Builder::Wire bitw;
            if (i == g_.m_L[L])
              bitw = j < spec.state_bits() ? layers_[u].state[j] : b_.zero();
            else if (j < spec.tapes() * (SB + 1)) {
              unsigned t = static_cast<unsigned>(j / (SB + 1));
              unsigned o = static_cast<unsigned>(j % (SB + 1));
              if (o < SB) bitw = layers_[u].sym[t][i][o];
              else {
                Builder::Wire past = b_.zero();
                for (std::uint64_t p = 0; p < i; ++p)
                  past = b_.lor(past, layers_[u].head_at[t][p]);
                bitw = past;
              }
            } else {
              bitw = b_.zero();
            }
            w = b_.lor(w, b_.land(len_is_[L], bitw));
          }
          if (w == b_.zero()) continue;
          out = b_.lor(out, b_.land(b_.eq_const(v, pair_u64(u, pair_u64(i, j))), w));
        }
      }
    }
    return b_.finish({g_.n, vbits}, out);
  }

  /// [M accepts x]: the state of the t_M(x)-th configuration equals accept.
  Circuit acceptance_circuit() {
    Builder::Wire out = b_.zero();
    for (unsigned L = 0; L <= g_.n; ++L) {
      Builder::Wire acc = b_.eq_const(layers_[g_.t_L[L]].state, g_.spec.accept);
      out = b_.lor(out, b_.land(len_is_[L], acc));
    }
    return b_.finish({g_.n}, out);
  }

 private:
  LengthGrid g_;
  Builder b_;
  Builder::Word x_;
  std::vector<Builder::Wire> len_is_;
  std::vector<detail::DecodedWires> layers_;
};

}  // namespace synth
}  // namespace bitbound
