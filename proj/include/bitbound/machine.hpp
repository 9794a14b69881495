#pragma once

#include "bitbound/nat.hpp"
#include "bitbound/natset.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bitbound {

// Tape symbols. Cell 0 of every tape holds the end marker; it is never
// overwritten and a head scanning it never moves left.
inline constexpr std::uint8_t SYM_MARKER = 0;
inline constexpr std::uint8_t SYM_BLANK = 1;
inline constexpr std::uint8_t SYM_ZERO = 2;
inline constexpr std::uint8_t SYM_ONE = 3;

enum Move : std::uint8_t { MOVE_L = 0, MOVE_S = 1, MOVE_R = 2 };

inline constexpr std::uint64_t MAX_CELLS = 1ull << 22;  // resource guard

/// Deterministic multitape oracle Turing machine. Tapes are ordered: k input
/// tapes, then l oracle tapes, then w work tapes. Halting states have no
/// table rows (their successor is the configuration itself); the query state
/// branches on the oracle answer vector via `qbranch`.
struct MachineSpec {
  struct Entry {
    unsigned next_state = 0;
    std::vector<std::uint8_t> writes;  // one symbol per oracle+work tape
    std::vector<std::uint8_t> moves;   // one move per tape
    bool operator==(const Entry&) const = default;
  };

  unsigned k = 1;  // input tapes, 1..2
  unsigned l = 0;  // oracle tapes, 0..1
  unsigned w = 0;  // work tapes, 0..3
  unsigned nsym = 4;
  unsigned nstates = 2;
  unsigned start = 0, accept = 0, reject = 1;
  unsigned qstate = 0;                     // meaningful only when l == 1
  std::vector<std::vector<Entry>> table;   // [state][symbol tuple index]
  std::vector<unsigned> qbranch;           // [answer vector], size 2^l

  bool operator==(const MachineSpec&) const = default;

  unsigned tapes() const { return k + l + w; }
  unsigned sym_bits() const { return static_cast<unsigned>(len_u64(nsym - 1)); }
  unsigned state_bits() const { return static_cast<unsigned>(len_u64(nstates - 1)); }
  std::uint64_t tuple_count() const {
    std::uint64_t n = 1;
    for (unsigned t = 0; t < tapes(); ++t) n *= nsym;
    return n;
  }
  bool is_halting(unsigned s) const { return s == accept || s == reject; }
  bool is_query(unsigned s) const { return l > 0 && s == qstate; }
  bool has_row(unsigned s) const { return !is_halting(s) && !is_query(s); }

  std::uint64_t tuple_index(const std::uint8_t* syms) const {
    std::uint64_t idx = 0, radix = 1;
    for (unsigned t = 0; t < tapes(); ++t) {
      idx += syms[t] * radix;
      radix *= nsym;
    }
    return idx;
  }
  std::uint64_t tuple_index(const std::vector<std::uint8_t>& syms) const {
    return tuple_index(syms.data());
  }

  /// Checks the structural invariants of the model. Returns an error message
  /// or empty string.
  std::string validate() const {
    if (k < 1 || k > 2) return "input tape count out of range";
    if (l > 1) return "oracle tape count out of range";
    if (w > 3) return "work tape count out of range";
    if (nsym < 4 || nsym > 12) return "alphabet size out of range";
    if (nstates < 2 || nstates > 9) return "state count out of range";
    if (start >= nstates || accept >= nstates || reject >= nstates) return "state id out of range";
    if (accept == reject) return "accept and reject must differ";
    if (l > 0) {
      if (qstate >= nstates) return "query state out of range";
      if (is_halting(qstate)) return "query state cannot be halting";
      if (qbranch.size() != (1u << l)) return "query branch table has wrong size";
      for (unsigned s : qbranch)
        if (s >= nstates) return "query branch target out of range";
    }
    if (table.size() != nstates) return "table has wrong state count";
    for (unsigned s = 0; s < nstates; ++s) {
      if (!has_row(s)) {
        if (!table[s].empty()) return "halting/query state must have no rows";
        continue;
      }
      if (table[s].size() != tuple_count()) return "row count mismatch";
      for (std::uint64_t i = 0; i < table[s].size(); ++i) {
        const Entry& e = table[s][i];
        if (e.next_state >= nstates) return "transition target out of range";
        if (e.writes.size() != l + w || e.moves.size() != tapes()) return "entry arity mismatch";
        std::vector<std::uint8_t> syms(tapes());
        std::uint64_t rest = i;
        for (unsigned t = 0; t < tapes(); ++t) { syms[t] = rest % nsym; rest /= nsym; }
        for (unsigned t = 0; t < tapes(); ++t) {
          if (e.moves[t] > MOVE_R) return "invalid move";
          if (syms[t] == SYM_MARKER && e.moves[t] == MOVE_L) return "left move on end marker";
          if (t < k && syms[t] == SYM_BLANK && e.moves[t] == MOVE_R)
            return "right move on blank input cell";
          if (t >= k) {
            std::uint8_t wr = e.writes[t - k];
            if (wr >= nsym) return "written symbol out of range";
            if (syms[t] == SYM_MARKER && wr != SYM_MARKER) return "end marker overwritten";
            if (syms[t] != SYM_MARKER && wr == SYM_MARKER) return "end marker written inside tape";
          }
        }
      }
    }
    return "";
  }
};

/// Number code of a machine. Field layout, LSB first:
///   [k-1:1][l:1][w:2][ext:1 (ext=1 -> [nsym-5:3])][nstates-2:3]
///   [start:SW][accept:SW][reject:SW][qstate:SW if l=1]
///   table rows (states ascending, skipping halting/query; tuple index
///   ascending): [next:SW][writes:SB x (l+w)][moves:2 x T]
///   [qbranch: SW x 2^l if l=1]
///   zero padding, then a single sentinel 1 bit.
/// The code is padded so that every number packed into a configuration
/// (per-cell packed values and state ids) is below the code.
inline Nat encode_machine(const MachineSpec& spec) {
  if (!spec.validate().empty()) throw std::invalid_argument("encode_machine: " + spec.validate());
  detail::BitWriter bw;
  bw.put(spec.k - 1, 1);
  bw.put(spec.l, 1);
  bw.put(spec.w, 2);
  if (spec.nsym == 4) {
    bw.put(0, 1);
  } else {
    bw.put(1, 1);
    bw.put(spec.nsym - 5, 3);
  }
  bw.put(spec.nstates - 2, 3);
  const unsigned SW = spec.state_bits();
  const unsigned SB = spec.sym_bits();
  bw.put(spec.start, SW);
  bw.put(spec.accept, SW);
  bw.put(spec.reject, SW);
  if (spec.l > 0) bw.put(spec.qstate, SW);
  for (unsigned s = 0; s < spec.nstates; ++s) {
    if (!spec.has_row(s)) continue;
    for (const auto& e : spec.table[s]) {
      bw.put(e.next_state, SW);
      for (std::uint8_t wr : e.writes) bw.put(wr, SB);
      for (std::uint8_t mv : e.moves) bw.put(mv, 2);
    }
  }
  if (spec.l > 0)
    for (unsigned s : spec.qbranch) bw.put(s, SW);
  // Pad so the code dominates every configuration component.
  std::uint64_t min_payload = spec.tapes() * (SB + 1);
  if (min_payload < SW) min_payload = SW;
  while (bw.pos < min_payload) bw.put(0, 1);
  boost::multiprecision::bit_set(bw.value, static_cast<unsigned>(bw.pos));
  return bw.value;
}

inline std::optional<MachineSpec> decode_machine(const Nat& code) {
  if (code <= 0) return std::nullopt;
  MachineSpec spec;
  detail::BitReader br{code, 0, boost::multiprecision::msb(code)};
  spec.k = static_cast<unsigned>(br.get(1)) + 1;
  spec.l = static_cast<unsigned>(br.get(1));
  spec.w = static_cast<unsigned>(br.get(2));
  if (br.get(1)) spec.nsym = static_cast<unsigned>(br.get(3)) + 5;
  else spec.nsym = 4;
  spec.nstates = static_cast<unsigned>(br.get(3)) + 2;
  const unsigned SW = spec.state_bits();
  const unsigned SB = spec.sym_bits();
  spec.start = static_cast<unsigned>(br.get(SW));
  spec.accept = static_cast<unsigned>(br.get(SW));
  spec.reject = static_cast<unsigned>(br.get(SW));
  if (spec.l > 0) spec.qstate = static_cast<unsigned>(br.get(SW));
  if (!br.ok || spec.accept == spec.reject) return std::nullopt;
  if (spec.start >= spec.nstates || spec.accept >= spec.nstates || spec.reject >= spec.nstates)
    return std::nullopt;
  spec.table.resize(spec.nstates);
  for (unsigned s = 0; s < spec.nstates; ++s) {
    if (!spec.has_row(s)) continue;
    spec.table[s].resize(spec.tuple_count());
    for (auto& e : spec.table[s]) {
      e.next_state = static_cast<unsigned>(br.get(SW));
      e.writes.resize(spec.l + spec.w);
      for (auto& wr : e.writes) wr = static_cast<std::uint8_t>(br.get(SB));
      e.moves.resize(spec.tapes());
      for (auto& mv : e.moves) mv = static_cast<std::uint8_t>(br.get(2));
    }
  }
  if (spec.l > 0) {
    spec.qbranch.resize(1u << spec.l);
    for (auto& s : spec.qbranch) s = static_cast<unsigned>(br.get(SW));
  }
  if (!br.ok) return std::nullopt;
  // Remaining bits up to the sentinel must be zero padding.
  for (std::uint64_t p = br.pos; p < br.end; ++p)
    if (bit_of(code, p)) return std::nullopt;
  if (!spec.validate().empty()) return std::nullopt;
  // Canonical codes dominate all configuration components.
  std::uint64_t min_payload = spec.tapes() * (SB + 1);
  if (min_payload < SW) min_payload = SW;
  if (br.end < min_payload) return std::nullopt;
  if (encode_machine(spec) != code) return std::nullopt;
  return spec;
}

inline bool is_suitable(const Nat& code, unsigned k, unsigned l) {
  auto spec = decode_machine(code);
  return spec && spec->k == k && spec->l == l;
}

/// |x̄| = |x_1| + ... + |x_k|.
inline Nat input_length(const std::vector<Nat>& inputs) {
  Nat n = 0;
  for (const Nat& x : inputs) n += len(x);
  return n;
}

/// Bd0(M, x̄, s, q) = < max{s, |x̄|+2, |q|} + 1, |M| >.
inline Nat bd0(const Nat& code, const std::vector<Nat>& inputs, const Nat& s, const Nat& q) {
  Nat m = input_length(inputs) + 2;
  if (s > m) m = s;
  if (Nat(len(q)) > m) m = len(q);
  return pair(m + 1, Nat(len(code)));
}

/// Bd(M, x̄, t, s, q) = < t, Bd0(M, x̄, s, q) >.
inline Nat bd(const Nat& code, const std::vector<Nat>& inputs, const Nat& t, const Nat& s,
              const Nat& q) {
  return pair(t, bd0(code, inputs, s, q));
}

/// max{s, |x̄|+2, |q|}: the index holding the state; cells run below it.
inline std::uint64_t config_width(const std::vector<Nat>& inputs, const Nat& s, const Nat& q) {
  Nat m = input_length(inputs) + 2;
  if (s > m) m = s;
  if (Nat(len(q)) > m) m = len(q);
  if (m > MAX_CELLS) throw std::length_error("configuration bound exceeds the desk-scale guard");
  return to_u64(m);
}

/// A configuration decoded from its set representation: state number, per
/// tape the cell contents below m and the head position.
struct Config {
  std::uint64_t m = 0;
  Nat state;                                   // raw retrieved number
  std::vector<std::vector<std::uint8_t>> sym;  // [tape][cell], cells 0..m-1
  std::vector<std::uint64_t> head;             // [tape]

  bool operator==(const Config&) const = default;
};

/// Context common to the step predicates.
struct StepContext {
  Nat code;
  MachineSpec spec;
  std::vector<Nat> inputs;
  Nat s, q;
  std::vector<NatSet> oracles;
  std::uint64_t m = 0;       // max{s, |x̄|+2, |q|}
  std::uint64_t code_len = 0;

  static StepContext make(const Nat& code, std::vector<Nat> inputs, Nat s, Nat q,
                          std::vector<NatSet> oracles = {}) {
    auto spec = decode_machine(code);
    if (!spec) throw std::invalid_argument("step context: not a machine code");
    StepContext ctx;
    ctx.code = code;
    ctx.spec = *spec;
    ctx.inputs = std::move(inputs);
    ctx.s = std::move(s);
    ctx.q = std::move(q);
    ctx.oracles = std::move(oracles);
    ctx.m = config_width(ctx.inputs, ctx.s, ctx.q);
    ctx.code_len = len(code);
    return ctx;
  }

  Nat bd0_value() const { return bd0(code, inputs, s, q); }
  Nat bd_value(const Nat& t) const { return bd(code, inputs, t, s, q); }
};

/// Packs cell i of a configuration: per tape, SB symbol bits then one
/// position bit ("head is strictly left of i"), little-endian in tape order.
inline std::uint64_t packed_cell(const MachineSpec& spec, const Config& cfg, std::uint64_t i) {
  const unsigned SB = spec.sym_bits();
  std::uint64_t v = 0;
  for (unsigned t = 0; t < spec.tapes(); ++t) {
    std::uint64_t off = t * (SB + 1);
    v |= static_cast<std::uint64_t>(cfg.sym[t][i]) << off;
    if (cfg.head[t] < i) v |= 1ull << (off + SB);
  }
  return v;
}

/// The start configuration: start state, inputs written in binary after the
/// end marker (bit j of x at cell j+1), all heads at cell 0, other tapes
/// blank.
inline Config start_config_decoded(const StepContext& ctx) {
  Config cfg;
  cfg.m = ctx.m;
  cfg.state = ctx.spec.start;
  cfg.sym.assign(ctx.spec.tapes(), std::vector<std::uint8_t>(ctx.m, SYM_BLANK));
  cfg.head.assign(ctx.spec.tapes(), 0);
  for (unsigned t = 0; t < ctx.spec.tapes(); ++t) cfg.sym[t][0] = SYM_MARKER;
  for (unsigned t = 0; t < ctx.spec.k && t < ctx.inputs.size(); ++t) {
    std::uint64_t nbits = len(ctx.inputs[t]);
    for (std::uint64_t j = 0; j < nbits && j + 1 < ctx.m; ++j)
      cfg.sym[t][j + 1] = bit_of(ctx.inputs[t], j) ? SYM_ONE : SYM_ZERO;
  }
  return cfg;
}

/// Set representation of a configuration: all <i,j> with i <= m, j < |M|
/// where the i-th configuration number has bit j set (index m holds the
/// state).
inline NatSet config_to_set(const StepContext& ctx, const Config& cfg) {
  std::vector<Nat> elems;
  for (std::uint64_t i = 0; i < ctx.m; ++i) {
    std::uint64_t v = packed_cell(ctx.spec, cfg, i);
    for (unsigned j = 0; v >> j; ++j)
      if ((v >> j) & 1) elems.push_back(pair(Nat(i), Nat(j)));
  }
  for (std::uint64_t j = 0; j < ctx.code_len; ++j)
    if (bit_of(cfg.state, j)) elems.push_back(pair(Nat(ctx.m), Nat(j)));
  return NatSet(std::move(elems));
}

/// Best-effort decode of a set as a configuration. Only pairs <i,j> with
/// i <= m and j < |M| are read; the head of a tape is one left of the first
/// cell whose position bit is set (m-1 if none is).
inline Config set_to_config(const StepContext& ctx, const NatSet& x) {
  const unsigned SB = ctx.spec.sym_bits();
  const unsigned T = ctx.spec.tapes();
  Config cfg;
  cfg.m = ctx.m;
  cfg.state = 0;
  cfg.sym.assign(T, std::vector<std::uint8_t>(ctx.m, 0));
  cfg.head.assign(T, ctx.m - 1);
  std::vector<std::vector<bool>> posbit(T, std::vector<bool>(ctx.m, false));
  for (const Nat& e : x) {
    auto [i, j] = unpair(e);
    if (i > ctx.m || Nat(len(ctx.code)) <= j) continue;
    std::uint64_t ju = to_u64(j);
    if (i == ctx.m) {
      if (ju < ctx.code_len) boost::multiprecision::bit_set(cfg.state, static_cast<unsigned>(ju));
      continue;
    }
    std::uint64_t iu = to_u64(i);
    unsigned t = static_cast<unsigned>(ju / (SB + 1));
    unsigned o = static_cast<unsigned>(ju % (SB + 1));
    if (t >= T) continue;  // bits above the packed width are junk
    if (o < SB) cfg.sym[t][iu] |= static_cast<std::uint8_t>(1u << o);
    else posbit[t][iu] = true;
  }
  for (unsigned t = 0; t < T; ++t)
    for (std::uint64_t i = 1; i < ctx.m; ++i)
      if (posbit[t][i]) { cfg.head[t] = i - 1; break; }
  return cfg;
}

/// Outcome of one step of the implicit successor machine: either "fail"
/// (some Line 1-3 check failed) or the bits of the successor configuration.
struct StepOutcome {
  bool fail = false;
  Config next;  // meaningful only when !fail

  /// Bit v of the successor: 0 for i > m, state bit for i = m, packed cell
  /// bit for i < m, where v = <i,j>. A failing step carries no bits.
  bool bit(const StepContext& ctx, const Nat& v) const {
    if (fail) return false;
    auto [i, j] = unpair(v);
    if (i > ctx.m) return false;
    if (Nat(ctx.code_len) <= j) return false;
    std::uint64_t ju = to_u64(j);
    if (i == ctx.m) return bit_of(next.state, ju);
    std::uint64_t pv = packed_cell(ctx.spec, next, to_u64(i));
    return ju < 64 && ((pv >> ju) & 1);
  }
};

namespace detail {

/// Reads the query written on oracle tape `t` (binary, bit c-1 at cell c,
/// run of digit symbols starting at cell 1). Returns the value and whether
/// the run stays below cell |q|.
inline std::pair<Nat, bool> read_query(const StepContext& ctx, const Config& cfg, unsigned t) {
  Nat value = 0;
  bool in_range = true;
  std::uint64_t qlen = len(ctx.q);
  for (std::uint64_t c = 1; c < ctx.m; ++c) {
    std::uint8_t s = cfg.sym[t][c];
    if (s != SYM_ZERO && s != SYM_ONE) break;
    if (s == SYM_ONE) boost::multiprecision::bit_set(value, static_cast<unsigned>(c - 1));
    if (c >= qlen) in_range = false;
  }
  return {value, in_range};
}

}  // namespace detail

namespace detail {

/// Decision of one step: the Line 1-3 checks plus the Line 5 outputs.
struct StepDecision {
  bool fail = false;
  unsigned next_state = 0;
  std::array<std::uint8_t, 8> writes{};     // per tape (input writes = scanned)
  std::array<std::uint64_t, 8> new_head{};  // per tape
};

inline StepDecision decide_step(const StepContext& ctx, const Config& cfg) {
  const MachineSpec& spec = ctx.spec;
  StepDecision d;
  d.fail = true;

  if (cfg.state >= spec.nstates) return d;
  unsigned state = static_cast<unsigned>(cfg.state);

  const Nat xlen2 = input_length(ctx.inputs) + 2;
  const std::uint64_t qlen = len(ctx.q);
  std::array<std::uint8_t, 8> scanned{};
  for (unsigned t = 0; t < spec.tapes(); ++t) {
    scanned[t] = cfg.sym[t][cfg.head[t]];
    if (scanned[t] >= spec.nsym) return d;
    if (t >= spec.k && t < spec.k + spec.l && Nat(cfg.head[t]) >= Nat(qlen)) return d;
    if (t >= spec.k + spec.l && Nat(cfg.head[t]) >= ctx.s) return d;
  }

  // Line 5: the transition.
  std::array<std::uint8_t, 8> moves{};
  moves.fill(MOVE_S);
  for (unsigned t = 0; t < spec.tapes(); ++t) d.writes[t] = scanned[t];
  if (spec.is_halting(state)) {
    d.next_state = state;
  } else if (spec.is_query(state)) {
    unsigned answers = 0;
    for (unsigned i = 0; i < spec.l; ++i) {
      auto [qv, in_range] = detail::read_query(ctx, cfg, spec.k + i);
      if (!in_range) return d;
      bool ans = i < ctx.oracles.size() && ctx.oracles[i].contains(qv);
      if (ans) answers |= 1u << i;
    }
    d.next_state = spec.qbranch[answers];
  } else {
    const MachineSpec::Entry& e = spec.table[state][spec.tuple_index(scanned.data())];
    d.next_state = e.next_state;
    for (unsigned t = spec.k; t < spec.tapes(); ++t) d.writes[t] = e.writes[t - spec.k];
    for (unsigned t = 0; t < spec.tapes(); ++t) moves[t] = e.moves[t];
  }

  // Line 3: new head positions must not be off.
  for (unsigned t = 0; t < spec.tapes(); ++t) {
    std::uint64_t h = cfg.head[t];
    if (moves[t] == MOVE_L) {
      if (h == 0) return d;
      h -= 1;
    } else if (moves[t] == MOVE_R) {
      h += 1;
    }
    if (t < spec.k) {
      if (Nat(h) >= xlen2) return d;
    } else if (t < spec.k + spec.l) {
      if (h >= qlen) return d;
    } else {
      if (Nat(h) >= ctx.s) return d;
    }
    d.new_head[t] = h;
  }
  d.fail = false;
  return d;
}

}  // namespace detail

/// One step of the successor machine on a decoded configuration.
///
/// Checks (any failure yields fail):
///   - the retrieved state is a state of M, the oracle head positions are
///     below |q|, the work head positions are below s, the scanned symbols
///     are in the alphabet, and query digit runs end below |q|;
///   - the new head positions determined by the transition are not off
///     (input below |x̄|+2, oracle below |q|, work below s).
/// Whether fail is returned does not depend on any queried index.
inline StepOutcome succ_step_decoded(const StepContext& ctx, const Config& cfg) {
  StepOutcome out;
  detail::StepDecision d = detail::decide_step(ctx, cfg);
  if (d.fail) { out.fail = true; return out; }
  out.next = cfg;
  out.next.state = d.next_state;
  for (unsigned t = 0; t < ctx.spec.tapes(); ++t) {
    out.next.sym[t][cfg.head[t]] = d.writes[t];
    out.next.head[t] = d.new_head[t];
  }
  return out;
}

/// In-place variant; returns false when the step fails.
inline bool step_inplace(const StepContext& ctx, Config& cfg) {
  detail::StepDecision d = detail::decide_step(ctx, cfg);
  if (d.fail) return false;
  cfg.state = d.next_state;
  for (unsigned t = 0; t < ctx.spec.tapes(); ++t) {
    cfg.sym[t][cfg.head[t]] = d.writes[t];
    cfg.head[t] = d.new_head[t];
  }
  return true;
}

/// succ on the set representation. Garbage sets are decoded best-effort;
/// the Line 1-3 checks catch whatever inconsistencies they can see.
inline StepOutcome succ_step(const StepContext& ctx, const NatSet& x) {
  return succ_step_decoded(ctx, set_to_config(ctx, x));
}

inline bool fail_pred(const StepContext& ctx, const NatSet& x) { return succ_step(ctx, x).fail; }

/// Next(X̄, X, M, x̄, s, q, v): the successor bit at v; meaningful only when
/// Fail does not hold (the value is still defined, from the same pipeline).
inline bool next_pred(const StepContext& ctx, const NatSet& x, const Nat& v) {
  return succ_step(ctx, x).bit(ctx, v);
}

/// Start(M, x̄, s, q, v): membership of v in the start configuration set.
inline bool start_pred(const StepContext& ctx, const Nat& v) {
  StepOutcome o;
  o.next = start_config_decoded(ctx);
  return o.bit(ctx, v);
}

inline NatSet start_config(const StepContext& ctx) {
  return config_to_set(ctx, start_config_decoded(ctx));
}

}  // namespace bitbound
