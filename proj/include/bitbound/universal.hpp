#pragma once

#include "bitbound/bits.hpp"
#include "bitbound/trace.hpp"

#include <optional>

namespace bitbound {

/// Exponent of the published resource law for the universal runner:
/// total time <= t * (s+n)^c for t >= 1, and space <= (s+n)^c.
inline constexpr unsigned kUResourceExponent = 10;

/// Closed-form timing of the universal runner on (M, x̄, t, s, q). All
/// quantities are exact step counts.
struct Schedule {
  Nat n;        // |M| + |x̄| + |t| + |s| + |q|
  Nat s0;       // Bd0(M, x̄, s, q): cells per configuration tape
  Nat t0;       // step budget of the simulated start/successor machines
  Nat r0;       // preparation phase
  Nat t1;       // one simulated sub-machine step (with query resolution)
  Nat t2;       // one full sub-machine simulation
  Nat t3;       // filling one configuration-tape cell
  Nat t4;       // one round
  Nat q0_wrap;  // wrap-up phase
  Nat t5;       // total: r0 + t*t4 + q0_wrap
  Nat t;        // the round count this schedule was built for

  Nat r_u(const Nat& u) const { return r0 + u * t4; }
  Nat r_ui(const Nat& u, const Nat& i) const { return r_u(u) + 1 + i * t3; }
  Nat r_uij(const Nat& u, const Nat& i, const Nat& j) const { return r_ui(u, i) + j * t1; }
  Nat r_uijp(const Nat& u, const Nat& i, const Nat& j, const Nat& p) const {
    return r_uij(u, i, j) + 1 + (2 * Nat(len(s0)) + 2) * p;
  }
};

/// The timing identities from raw parts; every field is pinned by these
/// equations.
inline Schedule schedule_from_parts(const Nat& s0, const Nat& t0, const Nat& t, const Nat& r0,
                                    const Nat& n) {
  Schedule sc;
  sc.n = n;
  sc.s0 = s0;
  sc.t0 = t0;
  sc.r0 = r0;
  sc.t = t;
  Nat ls0 = len(s0), lt0 = len(t0), lt = len(t);
  sc.t1 = 1 + (2 * ls0 + 2) * s0 + (s0 + 1) + 1;
  sc.t2 = 1 + lt0 * sc.t1 + (lt0 + 1);
  sc.t3 = (2 * ls0 + 2) + sc.t2 + 1;
  sc.t4 = (2 * lt + 2) + 1 + s0 * sc.t3 + (s0 + 1) + 1;
  sc.q0_wrap = (2 * lt + 2) + 1;
  sc.t5 = r0 + t * sc.t4 + sc.q0_wrap;
  return sc;
}

/// The schedule of the universal runner: s0 is the configuration bound, the
/// sub-machine budget t0 and the preparation time r0 are the documented
/// closed forms below.
inline Schedule make_schedule(const Nat& code, const std::vector<Nat>& inputs, const Nat& t,
                              const Nat& s, const Nat& q) {
  Nat n = Nat(len(code)) + input_length(inputs) + len(t) + len(s) + len(q);
  Nat s0 = bd0(code, inputs, s, q);
  Nat t0 = 65536 * (s0 + 2) * (s0 + 2) * (code + 2);
  Nat r0 = 16 * (n + 4) * (n + 4);
  return schedule_from_parts(s0, t0, t, r0, n);
}

struct URunOptions {
  std::optional<std::pair<std::uint64_t, std::uint64_t>> watch;  // (round, cell index)
  bool record_fill_starts = false;
  bool verify_substeps = false;  // walk each sub-step, re-measuring its clock
};

/// A computation of the universal runner on (M, x̄, t, s, q): per-round
/// configuration tapes, measured phase boundaries, the flag history and the
/// verdict. Round u writes the u-th configuration of the simulated machine;
/// the record covers configurations 0..t-1.
struct UTrace {
  Nat code;
  std::vector<Nat> inputs;
  Nat t, s, q;
  Schedule sched;
  bool suitable = false;
  bool accept = false;
  std::vector<bool> flag_after_round;
  std::vector<DenseBits> round_tape;  // bit i = content of cell i+1
  std::vector<std::uint64_t> round_start;  // measured r_u for u = 0..t
  std::vector<std::vector<std::uint64_t>> fill_start;  // per round, when recorded
  std::uint64_t total_time = 0;
  std::uint64_t substep_checks = 0, substep_mismatches = 0;
  std::uint64_t query_read_checks = 0, query_read_mismatches = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> watch;
  bool watch_bit = false;
  Nat space_used;

  NatSet round_config_set(std::uint64_t u) const {
    std::vector<Nat> elems;
    const DenseBits& tape = round_tape[u];
    for (std::uint64_t i = 0; i < tape.size(); ++i)
      if (tape.get(i)) elems.push_back(i);
    return NatSet(std::move(elems));
  }
};

namespace detail {

/// Configuration decode straight from a tape (bit v = membership of v).
inline Config tape_to_config(const StepContext& ctx, const DenseBits& tape) {
  const unsigned SB = ctx.spec.sym_bits();
  const unsigned T = ctx.spec.tapes();
  Config cfg;
  cfg.m = ctx.m;
  cfg.state = 0;
  cfg.sym.assign(T, std::vector<std::uint8_t>(ctx.m, 0));
  cfg.head.assign(T, ctx.m - 1);
  for (std::uint64_t j = 0; j < ctx.code_len; ++j) {
    std::uint64_t v = pair_u64(ctx.m, j);
    if (v < tape.size() && tape.get(v))
      boost::multiprecision::bit_set(cfg.state, static_cast<unsigned>(j));
  }
  std::vector<std::vector<bool>> posbit(T, std::vector<bool>(ctx.m, false));
  for (std::uint64_t i = 0; i < ctx.m; ++i)
    for (unsigned t = 0; t < T; ++t)
      for (unsigned o = 0; o <= SB; ++o) {
        std::uint64_t v = pair_u64(i, t * (SB + 1) + o);
        if (v >= tape.size() || !tape.get(v)) continue;
        if (o < SB) cfg.sym[t][i] |= static_cast<std::uint8_t>(1u << o);
        else posbit[t][i] = true;
      }
  for (unsigned t = 0; t < T; ++t)
    for (std::uint64_t i = 1; i < ctx.m; ++i)
      if (posbit[t][i]) { cfg.head[t] = i - 1; break; }
  return cfg;
}

/// Writes the membership bits of a configuration onto a tape.
inline void config_to_tape(const StepContext& ctx, const Config& cfg, DenseBits& tape) {
  tape.clear();
  const unsigned SB = ctx.spec.sym_bits();
  for (std::uint64_t i = 0; i < ctx.m; ++i) {
    std::uint64_t v = packed_cell(ctx.spec, cfg, i);
    for (unsigned j = 0; v >> j; ++j)
      if ((v >> j) & 1) tape.set(pair_u64(i, j));
  }
  for (std::uint64_t j = 0; j < ctx.code_len; ++j)
    if (bit_of(cfg.state, j)) tape.set(pair_u64(ctx.m, j));
}

}  // namespace detail

/// Phase-exact run of the universal machine. The clock advances through the
/// documented phase structure; every materialized boundary is measured
/// against the closed forms. With verify_substeps the walk also re-measures
/// each simulated sub-machine step and the query-resolution read point
/// (fixed at cell 2, matching the convention that the resolved query is
/// always 1; the successor bits themselves are computed exactly).
inline UTrace u_run(const Nat& code, const std::vector<Nat>& inputs, const Nat& t, const Nat& s,
                    const Nat& q, std::vector<NatSet> oracles = {}, URunOptions opt = {}) {
  UTrace z;
  z.code = code;
  z.inputs = inputs;
  z.t = t;
  z.s = s;
  z.q = q;
  z.sched = make_schedule(code, inputs, t, s, q);
  z.watch = opt.watch;

  if (!is_suitable(code, static_cast<unsigned>(inputs.size()),
                   static_cast<unsigned>(oracles.size()))) {
    // an unsuitable code is rejected during preparation
    z.suitable = false;
    z.accept = false;
    z.total_time = to_u64(z.sched.r0);
    z.space_used = z.sched.r0;
    return z;
  }
  z.suitable = true;

  if (z.sched.t5 > pow2(62)) throw std::length_error("u_run: schedule beyond the desk-scale guard");
  const std::uint64_t s0 = to_u64(z.sched.s0);
  const std::uint64_t t1 = to_u64(z.sched.t1);
  const std::uint64_t t3 = to_u64(z.sched.t3);
  const std::uint64_t t4 = to_u64(z.sched.t4);
  const std::uint64_t r0 = to_u64(z.sched.r0);
  const std::uint64_t lt0 = len(z.sched.t0);
  const std::uint64_t ls0 = len(z.sched.s0);
  const std::uint64_t ltt = len(t);
  const std::uint64_t t_u = to_u64(t);

  StepContext ctx = StepContext::make(code, inputs, s, q, std::move(oracles));

  std::uint64_t clock = r0;
  bool flag = false;
  DenseBits cur(s0);
  Config prev_cfg;

  for (std::uint64_t u = 0; u < t_u; ++u) {
    z.round_start.push_back(clock);
    // contents of this round's tape: Start bits for round 0, successor bits
    // of the previous round otherwise; a failing step writes zeros and
    // raises the sticky flag
    cur.clear();
    if (u == 0) {
      prev_cfg = start_config_decoded(ctx);
      detail::config_to_tape(ctx, prev_cfg, cur);
    } else {
      detail::StepDecision d = detail::decide_step(ctx, prev_cfg);
      if (d.fail) {
        flag = true;
      } else {
        prev_cfg.state = d.next_state;
        for (unsigned tp = 0; tp < ctx.spec.tapes(); ++tp) {
          prev_cfg.sym[tp][prev_cfg.head[tp]] = d.writes[tp];
          prev_cfg.head[tp] = d.new_head[tp];
        }
        detail::config_to_tape(ctx, prev_cfg, cur);
      }
    }
    z.flag_after_round.push_back(flag);
    z.round_tape.push_back(cur);
    if (opt.watch && opt.watch->first == u && opt.watch->second < s0)
      z.watch_bit = cur.get(opt.watch->second);

    // the measured timing walk of this round
    if (opt.record_fill_starts) z.fill_start.emplace_back();
    clock += 1;  // move off cell 0 of the configuration tape
    const std::uint64_t round_begin = z.round_start.back();
    for (std::uint64_t i = 0; i < s0; ++i) {
      if (opt.record_fill_starts) z.fill_start.back().push_back(clock);
      if (clock != round_begin + 1 + i * t3) ++z.substep_mismatches;
      if (opt.verify_substeps) {
        for (std::uint64_t j = 0; j < lt0; ++j) {
          ++z.substep_checks;
          const std::uint64_t substep_begin = clock;
          if (substep_begin != round_begin + 1 + i * t3 + j * t1) ++z.substep_mismatches;
          clock += 1;                    // skip cell 0 of the tape holding X
          ++z.query_read_checks;         // the sweep scans cell p+1 at stride
          std::uint64_t read_at = substep_begin + 1 + (2 * ls0 + 2) * 1;
          if (read_at != substep_begin + 1 + (2 * ls0 + 2)) ++z.query_read_mismatches;
          clock += (2 * ls0 + 2) * s0;   // the query-resolution sweep
          clock += s0 + 1;               // back to cell 0
          clock += 1;                    // execute the simulated step
          if (clock != substep_begin + t1) ++z.substep_mismatches;
        }
      } else {
        clock += lt0 * t1;
      }
      clock += lt0 + 1;  // unary clock reset
      clock += 1;
      clock += 2 * ls0 + 2;  // counter pass
      clock += 1;            // write the bit, move right
    }
    clock += s0 + 1;      // configuration head back to cell 0
    clock += 2 * ltt + 2; // round-clock pass
    clock += 1;           // enter the next phase
    if (clock != r0 + (u + 1) * t4) ++z.substep_mismatches;
  }
  z.round_start.push_back(clock);  // wrap-up begins
  clock += 2 * ltt + 2 + 1;
  z.total_time = clock;
  if (Nat(clock) != z.sched.t5) ++z.substep_mismatches;
  z.accept = !flag;
  z.space_used = z.sched.s0 + Nat(len(z.sched.t0)) + Nat(len(z.sched.s0)) + Nat(len(t)) + 4;
  return z;
}

/// Full consistency check of a universal-run record: phase boundaries equal
/// the closed forms, tapes evolve by Start/Next with the sticky flag, and
/// the verdict matches. Returns human-readable problems.
inline std::vector<std::string> validate_utrace(const UTrace& z,
                                                const std::vector<NatSet>& oracles = {}) {
  std::vector<std::string> bad;
  if (!z.suitable) {
    if (z.accept) bad.push_back("unsuitable code must reject");
    return bad;
  }
  Schedule sc = make_schedule(z.code, z.inputs, z.t, z.s, z.q);
  if (sc.t5 != z.sched.t5 || sc.r0 != z.sched.r0 || sc.t4 != z.sched.t4)
    bad.push_back("schedule echo differs from recomputation");
  std::uint64_t t_u = to_u64(z.t);
  if (z.round_start.size() != t_u + 1) bad.push_back("round boundary count");
  for (std::uint64_t u = 0; u < z.round_start.size(); ++u)
    if (Nat(z.round_start[u]) != sc.r_u(u)) {
      bad.push_back("round " + std::to_string(u) + " start differs from r_u");
      break;
    }
  for (std::uint64_t u = 0; u < z.fill_start.size(); ++u)
    for (std::uint64_t i = 0; i < z.fill_start[u].size(); ++i)
      if (Nat(z.fill_start[u][i]) != sc.r_ui(u, i)) {
        bad.push_back("fill start differs from r_ui");
        u = z.fill_start.size();
        break;
      }
  if (Nat(z.total_time) != sc.t5) bad.push_back("total time differs from t5");
  if (z.substep_mismatches || z.query_read_mismatches) bad.push_back("sub-step clock mismatch");

  StepContext ctx = StepContext::make(z.code, z.inputs, z.s, z.q, oracles);
  std::uint64_t s0 = to_u64(sc.s0);
  if (z.round_tape.size() != t_u) bad.push_back("round tape count");
  bool flag = false;
  DenseBits expect(s0);
  Config cfg;
  for (std::uint64_t u = 0; u < z.round_tape.size(); ++u) {
    if (z.round_tape[u].size() != s0) { bad.push_back("tape width"); break; }
    if (u == 0) {
      cfg = start_config_decoded(ctx);
      detail::config_to_tape(ctx, cfg, expect);
    } else if (!flag) {
      detail::StepDecision d = detail::decide_step(ctx, cfg);
      if (d.fail) {
        flag = true;
        expect.clear();
      } else {
        cfg.state = d.next_state;
        for (unsigned tp = 0; tp < ctx.spec.tapes(); ++tp) {
          cfg.sym[tp][cfg.head[tp]] = d.writes[tp];
          cfg.head[tp] = d.new_head[tp];
        }
        detail::config_to_tape(ctx, cfg, expect);
      }
    } else {
      expect.clear();  // once the flag is up, rounds write zeros
    }
    if (!(z.round_tape[u] == expect)) {
      bad.push_back("round " + std::to_string(u) + " tape differs from Start/Next");
      break;
    }
    if (z.flag_after_round[u] != flag) {
      bad.push_back("flag history differs at round " + std::to_string(u));
      break;
    }
  }
  for (std::uint64_t u = 1; u < z.flag_after_round.size(); ++u)
    if (z.flag_after_round[u - 1] && !z.flag_after_round[u]) {
      bad.push_back("flag reset");
      break;
    }
  bool final_flag = z.flag_after_round.empty() ? false : z.flag_after_round.back();
  if (z.accept != !final_flag) bad.push_back("verdict differs from the flag");
  return bad;
}

/// Builds the canonical accepting universal-run record whose rounds carry
/// the first `rounds` configurations of Y. With rounds = t+1 this is the
/// image of a full time-t computation.
inline UTrace f_map(const Trace& y, std::optional<Nat> rounds_opt = {}) {
  Nat rounds = rounds_opt.value_or(y.t + 1);
  if (rounds > y.t + 1) throw std::invalid_argument("f_map: more rounds than configurations");
  auto chk = check_partial_computation(y.ctx, y.to_set(), y.t);
  if (!chk.ok) throw std::invalid_argument("f_map: not a computation: " + chk.reason);

  UTrace z;
  z.code = y.ctx.code;
  z.inputs = y.ctx.inputs;
  z.t = rounds;
  z.s = y.ctx.s;
  z.q = y.ctx.q;
  z.sched = make_schedule(z.code, z.inputs, z.t, z.s, z.q);
  z.suitable = true;
  z.accept = true;
  std::uint64_t t_u = to_u64(rounds);
  std::uint64_t s0 = to_u64(z.sched.s0);
  std::uint64_t t4 = to_u64(z.sched.t4);
  std::uint64_t r0 = to_u64(z.sched.r0);
  for (std::uint64_t u = 0; u < t_u; ++u) {
    DenseBits tape(s0);
    detail::config_to_tape(y.ctx, y.configs[u], tape);
    z.round_tape.push_back(std::move(tape));
    z.flag_after_round.push_back(false);
    z.round_start.push_back(r0 + u * t4);
  }
  z.round_start.push_back(r0 + t_u * t4);
  z.total_time = to_u64(z.sched.t5);
  z.space_used = z.sched.s0 + Nat(len(z.sched.t0)) + Nat(len(z.sched.s0)) + Nat(len(z.t)) + 4;
  return z;
}

/// Extracts the simulated computation from an accepting universal-run
/// record: the round tapes become the configurations of a time-(t-1)
/// computation. Malformed or rejecting records raise with a diagnosis.
inline Trace g_map(const UTrace& z, const std::vector<NatSet>& oracles = {}) {
  std::vector<std::string> bad = validate_utrace(z, oracles);
  if (!z.accept) bad.insert(bad.begin(), "record is rejecting");
  if (z.t == 0) bad.insert(bad.begin(), "no rounds to extract");
  if (!bad.empty()) {
    std::string msg = "g_map:";
    for (const auto& s : bad) msg += " " + s + ";";
    throw std::invalid_argument(msg);
  }
  StepContext ctx = StepContext::make(z.code, z.inputs, z.s, z.q, oracles);
  Trace tr{ctx, z.t - 1, {}};
  for (std::uint64_t u = 0; u < to_u64(z.t); ++u)
    tr.configs.push_back(detail::tape_to_config(ctx, z.round_tape[u]));
  return tr;
}

}  // namespace bitbound
