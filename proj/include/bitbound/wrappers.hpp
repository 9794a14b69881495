#pragma once

#include "bitbound/universal.hpp"

#include <sstream>

namespace bitbound {

/// The four universal driver machines: plain and bit-probing, in the
/// exponential-bound and space-logarithmic variants. They are drivers over
/// the phase-exact universal runner, with published resource terms; their
/// run records splice a fixed-length input-extraction prefix and a
/// fixed-length verdict suffix around a universal-run core.
namespace wrappers {

enum class Kind { M1, M1Star, M2, M2Star };

inline const char* name(Kind k) {
  switch (k) {
    case Kind::M1: return "m1";
    case Kind::M1Star: return "m1star";
    case Kind::M2: return "m2";
    case Kind::M2Star: return "m2star";
  }
  return "?";
}

/// Witness term of all four drivers: 2^((|z|+8)^2), far above every
/// preparation, round and wrap-up budget that a length-|z| input can incur.
inline Nat resource_term(const Nat& z) { return pow2((len(z) + 8) * (len(z) + 8)); }
inline Term resource_term_symbolic() {
  Term z256 = Term::constant(256) * Term::var();
  return z256.smash(z256);
}

/// Documented step counts of the splice phases.
inline Nat prefix_steps(const Nat& z) { return Nat(len(z)) * Nat(len(z)) + 10; }
inline Nat suffix_steps(const Nat& z, const Nat& s0) { return s0 + Nat(len(z)) + 10; }

/// Outcome of a driver run: the verdict, the universal-run core (when the
/// input decodes), and the resource accounting used by witness validation.
struct DriverRun {
  bool accept = false;
  std::string reject_reason;  // empty when the core ran
  std::optional<UTrace> core;
  Nat time_used;   // prefix + core + suffix
  Nat space_used;
  Nat query_used;  // drivers ask no oracle queries
};

/// Guard for desk-scale inputs: the embedded time parameter drives the
/// number of simulated rounds.
inline constexpr std::uint64_t kMaxEmbeddedTime = 1u << 20;

namespace detail {

inline DriverRun reject(const Nat& z, std::string why) {
  DriverRun r;
  r.accept = false;
  r.reject_reason = std::move(why);
  r.time_used = prefix_steps(z) + 1;
  r.space_used = Nat(len(z)) + 4;
  r.query_used = 0;
  return r;
}

inline DriverRun finish(const Nat& z, UTrace core, bool accept) {
  DriverRun r;
  r.accept = accept;
  r.time_used = prefix_steps(z) + core.total_time + suffix_steps(z, core.sched.s0);
  r.space_used = core.space_used + Nat(len(z)) + 4;
  r.query_used = 0;
  r.core = std::move(core);
  return r;
}

inline bool embedded_accepting(const UTrace& core, const MachineSpec& spec,
                               const StepContext& ctx) {
  if (core.round_tape.empty()) return false;
  Config last = bitbound::detail::tape_to_config(ctx, core.round_tape.back());
  return last.state == spec.accept;
}

}  // namespace detail

/// The plain drivers on <N, x, t>: run the universal machine on
/// (N, x, t, t, t) (space |t| for the space-logarithmic variant); reject on
/// garbage or a raised flag, otherwise accept iff the simulated machine
/// reached its accepting state.
inline DriverRun run_plain(Kind kind, const Nat& z, URunOptions opt = {}) {
  auto parts = untuple_code(z, 3);
  const Nat &N = parts[0], &x = parts[1], &t = parts[2];
  if (!is_suitable(N, 1, 0)) return detail::reject(z, "not a suitable machine code");
  if (t == 0) return detail::reject(z, "no steps to simulate");
  if (t > kMaxEmbeddedTime) throw std::length_error("driver: embedded time beyond the guard");
  Nat s = kind == Kind::M2 ? Nat(len(t)) : t;
  UTrace core = u_run(N, {x}, t, s, t, {}, opt);
  if (!core.accept) return detail::finish(z, std::move(core), false);
  StepContext ctx = StepContext::make(N, {x}, s, t);
  auto spec = decode_machine(N);
  bool acc = detail::embedded_accepting(core, *spec, ctx);
  return detail::finish(z, std::move(core), acc);
}

inline DriverRun m1_run(const Nat& z, URunOptions opt = {}) { return run_plain(Kind::M1, z, opt); }
inline DriverRun m2_run(const Nat& z, URunOptions opt = {}) { return run_plain(Kind::M2, z, opt); }

/// The bit-probing drivers on <N, x, t, v, s>: validate the probe
/// v = <u_v, i_v> against u_v <= t and the configuration bound, run the
/// universal machine for t+1 rounds watching the probed cell, and accept iff
/// the run accepts and the watched bit is 1.
inline DriverRun run_probe(Kind kind, const Nat& z, URunOptions opt = {}) {
  auto parts = untuple_code(z, 5);
  const Nat &N = parts[0], &x = parts[1], &t = parts[2], &v = parts[3], &s = parts[4];
  if (!is_suitable(N, 1, 0)) return detail::reject(z, "not a suitable machine code");
  if (t > kMaxEmbeddedTime) throw std::length_error("driver: embedded time beyond the guard");
  auto [u_v, i_v] = unpair(v);
  if (u_v > t) return detail::reject(z, "probe round past the time bound");
  Nat space = kind == Kind::M2Star ? Nat(len(s)) : s;
  Nat b0 = bd0(N, {x}, space, s);
  if (i_v >= b0) return detail::reject(z, "probe cell past the configuration bound");
  opt.watch = {{to_u64(u_v), to_u64(i_v)}};
  UTrace core = u_run(N, {x}, t + 1, space, s, {}, opt);
  bool acc = core.accept && core.watch_bit;
  return detail::finish(z, std::move(core), acc);
}

inline DriverRun m1star_run(const Nat& z, URunOptions opt = {}) {
  return run_probe(Kind::M1Star, z, opt);
}
inline DriverRun m2star_run(const Nat& z, URunOptions opt = {}) {
  return run_probe(Kind::M2Star, z, opt);
}

inline DriverRun run_driver(Kind k, const Nat& z, URunOptions opt = {}) {
  switch (k) {
    case Kind::M1: return m1_run(z, opt);
    case Kind::M2: return m2_run(z, opt);
    case Kind::M1Star: return m1star_run(z, opt);
    case Kind::M2Star: return m2star_run(z, opt);
  }
  throw std::logic_error("unknown driver");
}

/// A computation record of a driver: the spliced phases around the core.
/// Its set view numbers the embedded configurations as <u, i> directly and
/// stores the verdict in a marker element above the embedded trace bound.
struct DriverTrace {
  Nat z;
  Nat prefix, suffix;
  UTrace core;
  bool accept = false;

  Nat marker_base() const {
    return pair(core.t, bd(core.code, core.inputs, core.t, core.s, core.q));
  }

  NatSet to_set() const {
    std::vector<Nat> elems;
    for (std::uint64_t u = 0; u < core.round_tape.size(); ++u)
      for (std::uint64_t i = 0; i < core.round_tape[u].size(); ++i)
        if (core.round_tape[u].get(i)) elems.push_back(pair(Nat(u), Nat(i)));
    elems.push_back(marker_base() + (accept ? 1 : 0));
    return NatSet(std::move(elems));
  }
};

/// Checks that a record is exactly what the driver produces on z.
inline bool driver_trace_consistent(Kind k, const DriverTrace& d) {
  DriverRun ref = run_driver(k, d.z);
  if (!ref.core || !d.core.suitable) return false;
  if (ref.accept != d.accept) return false;
  if (!(ref.core->round_tape == d.core.round_tape)) return false;
  return validate_utrace(d.core).empty();
}

/// Forward transformation for the plain drivers: a halting computation of M
/// on x becomes the driver's record on <M, x, t_M(x)>. The core carries
/// configurations 0..t-1; acceptance transfers.
inline DriverTrace f_plain(Kind kind, const Trace& y, const Nat& t_M) {
  if (y.t != t_M) throw std::invalid_argument("f map: trace length differs from the bound");
  Nat z = tuple_code({y.ctx.code, y.ctx.inputs.at(0), t_M});
  DriverTrace d;
  d.z = z;
  d.core = f_map(y, t_M);  // rounds 0..t_M-1
  d.prefix = prefix_steps(z);
  d.suffix = suffix_steps(z, d.core.sched.s0);
  d.accept = classify(y) == Verdict::Accepting;
  return d;
}

/// Backward transformation: the simulated configurations of a plain
/// driver's record form a halting computation of M on x. The final
/// configuration is the repeat of the already-halting last round.
inline Trace g_plain(Kind kind, const DriverTrace& d, const std::vector<NatSet>& oracles = {}) {
  Trace partial = g_map(d.core, oracles);
  StepOutcome last = succ_step_decoded(partial.ctx, partial.configs.back());
  if (last.fail) throw std::invalid_argument("g map: the extracted computation fails at its end");
  partial.configs.push_back(std::move(last.next));
  partial.t = partial.t + 1;
  return partial;
}

/// Forward transformation for the bit-probing drivers: a partial time-t
/// computation containing v (below its bound) maps to an accepting record
/// on <M, x, t, v, t_M(x)>.
inline DriverTrace f_probe(Kind kind, const Trace& y, const Nat& v, const Nat& t_M) {
  Nat z = tuple_code({y.ctx.code, y.ctx.inputs.at(0), y.t, v, t_M});
  DriverTrace d;
  d.z = z;
  d.core = f_map(y);  // rounds 0..t
  auto [u_v, i_v] = unpair(v);
  d.core.watch = {{to_u64(u_v), to_u64(i_v)}};
  d.core.watch_bit = u_v <= y.t && i_v < y.ctx.bd0_value() &&
                     to_u64(i_v) < d.core.round_tape[to_u64(u_v)].size() &&
                     d.core.round_tape[to_u64(u_v)].get(to_u64(i_v));
  d.prefix = prefix_steps(z);
  d.suffix = suffix_steps(z, d.core.sched.s0);
  d.accept = d.core.watch_bit;
  return d;
}

/// Backward transformation for the bit-probing drivers: recovers the partial
/// time-t computation and certifies that v belongs to it.
inline Trace g_probe(Kind kind, const DriverTrace& d, const Nat& v) {
  Trace y = g_map(d.core);  // rounds 0..t give the time-t computation
  auto [u_v, i_v] = unpair(v);
  if (d.accept) {
    NatSet slice_set = config_to_set(y.ctx, y.configs.at(to_u64(u_v)));
    if (!slice_set.contains(i_v))
      throw std::invalid_argument("g map: accepted probe not present in the computation");
  }
  return y;
}

/// Resource validation of the drivers themselves over an input grid: time,
/// space and query stay strictly below the published term.
inline WitnessReport check_driver_witness(Kind k, const std::vector<Nat>& samples) {
  WitnessReport rep;
  for (const Nat& z : samples) {
    ++rep.checked;
    DriverRun r = run_driver(k, z);
    Nat bound = resource_term(z);
    std::ostringstream os;
    if (r.time_used >= bound) {
      os << "time " << r.time_used << " not below the term";
      rep.record({z}, os.str());
    } else if (r.space_used >= bound) {
      os << "space " << r.space_used << " not below the term";
      rep.record({z}, os.str());
    } else if (r.query_used >= Nat(len(bound))) {
      os << "query use not below the term length";
      rep.record({z}, os.str());
    }
  }
  return rep;
}

}  // namespace wrappers
}  // namespace bitbound
