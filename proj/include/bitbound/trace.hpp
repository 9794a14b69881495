#pragma once

#include "bitbound/machine.hpp"
#include "bitbound/term.hpp"

#include <optional>
#include <random>
#include <sstream>

namespace bitbound {

/// A computation: slices 0..t of the underlying set are the successive
/// configurations. Produced by the reference simulator in decoded form; the
/// set view is materialized on demand.
struct Trace {
  StepContext ctx;
  Nat t;
  std::vector<Config> configs;  // size t+1

  NatSet to_set() const {
    std::vector<Nat> elems;
    for (std::size_t i = 0; i < configs.size(); ++i) {
      NatSet ci = config_to_set(ctx, configs[i]);
      for (const Nat& v : ci) elems.push_back(pair(Nat(i), v));
    }
    return NatSet(std::move(elems));
  }

  Nat bd_value() const { return ctx.bd_value(t); }
  Nat bd0_value() const { return ctx.bd0_value(); }
};

inline bool is_halting_config(const MachineSpec& spec, const Config& c) {
  return c.state == spec.accept || c.state == spec.reject;
}

/// Runs M for t steps from the start configuration. Returns nullopt when any
/// step fails (some head would leave its declared bound).
inline std::optional<Trace> run(const StepContext& ctx, const Nat& t) {
  Trace tr{ctx, t, {}};
  std::uint64_t steps = to_u64(t);
  tr.configs.reserve(steps + 1);
  tr.configs.push_back(start_config_decoded(ctx));
  for (std::uint64_t i = 0; i < steps; ++i) {
    StepOutcome out = succ_step_decoded(ctx, tr.configs.back());
    if (out.fail) return std::nullopt;
    tr.configs.push_back(std::move(out.next));
  }
  return tr;
}

inline std::optional<Trace> run(const Nat& code, const std::vector<Nat>& inputs, const Nat& t,
                                const Nat& s, const Nat& q, std::vector<NatSet> oracles = {}) {
  return run(StepContext::make(code, inputs, s, q, std::move(oracles)), t);
}

/// Resource measurements of a run, without materializing configurations.
/// Stops stepping once a halting state is reached: halting configurations
/// repeat, so time/space/query are final at that point.
struct RunMeasurement {
  bool failed = false;
  Nat time;   // minimal halting index, t+1 if none
  Nat space;  // maximal work cell visited
  Nat query;  // maximal oracle cell visited
};

inline RunMeasurement run_measured(const StepContext& ctx, const Nat& t) {
  RunMeasurement m;
  Config cfg = start_config_decoded(ctx);
  const unsigned k = ctx.spec.k, l = ctx.spec.l, T = ctx.spec.tapes();
  std::uint64_t space = 0, query = 0;
  auto absorb = [&](const Config& c) {
    for (unsigned tp = k; tp < k + l; ++tp)
      if (c.head[tp] > query) query = c.head[tp];
    for (unsigned tp = k + l; tp < T; ++tp)
      if (c.head[tp] > space) space = c.head[tp];
  };
  absorb(cfg);
  m.time = t + 1;
  for (Nat i = 0; i < t; ++i) {
    if (is_halting_config(ctx.spec, cfg)) { m.time = i; break; }
    if (!step_inplace(ctx, cfg)) { m.failed = true; return m; }
    absorb(cfg);
  }
  if (m.time > t && is_halting_config(ctx.spec, cfg)) m.time = t;
  m.space = space;
  m.query = query;
  return m;
}

namespace detail {

/// Splits a set into slices 0..t plus the leftover elements, reading each
/// element as <i, v>.
struct SlicedSet {
  std::vector<NatSet> slices;      // 0..t
  std::vector<Nat> other;          // elements whose slice index exceeds t
};

inline SlicedSet split_slices(const NatSet& y, std::uint64_t t) {
  SlicedSet out;
  std::vector<std::vector<Nat>> buckets(t + 1);
  for (const Nat& e : y) {
    auto [i, v] = unpair(e);
    if (i <= t) buckets[to_u64(i)].push_back(v);
    else out.other.push_back(e);
  }
  out.slices.reserve(t + 1);
  for (auto& b : buckets) out.slices.emplace_back(std::move(b));
  return out;
}

}  // namespace detail

/// Diagnosis for the partial-computation predicate: which conjunct failed
/// first and where.
struct PartialCheck {
  bool ok = true;
  std::string reason;

  static PartialCheck fail(std::string r) { return {false, std::move(r)}; }
};

/// "Y is a partial time-t space-s query-q computation of M on x̄":
///   (1) every element of Y below Bd is <i,v> with i <= t and v < Bd0;
///   (2) Y_0 agrees with Start pointwise below Bd0;
///   (3) Y_{i+1} agrees with Next applied to Y_i pointwise below Bd0, i < t;
///   (4) no Fail(Y_i) for i < t.
/// Elements at or above Bd never affect the verdict.
inline PartialCheck check_partial_computation(const StepContext& ctx, const NatSet& y,
                                              const Nat& t) {
  const Nat bd0v = ctx.bd0_value();
  const Nat bdv = ctx.bd_value(t);
  const std::uint64_t tu = to_u64(t);

  auto sliced = detail::split_slices(y, tu);
  for (const Nat& e : sliced.other)
    if (e < bdv) {
      std::ostringstream os;
      os << "element " << e << " below Bd lies in a slice past t";
      return PartialCheck::fail(os.str());
    }
  for (std::uint64_t i = 0; i <= tu; ++i)
    for (const Nat& v : sliced.slices[i])
      if (v >= bd0v && pair(Nat(i), v) < bdv) {
        std::ostringstream os;
        os << "slice " << i << " holds " << v << " in [Bd0, Bd)";
        return PartialCheck::fail(os.str());
      }

  auto below = [&](const NatSet& s) {
    std::vector<Nat> kept;
    for (const Nat& v : s) {
      if (v >= bd0v) break;
      kept.push_back(v);
    }
    return NatSet(std::move(kept));
  };

  NatSet expected = start_config(ctx);
  if (below(sliced.slices[0]) != expected) return PartialCheck::fail("slice 0 differs from Start");
  for (std::uint64_t i = 0; i < tu; ++i) {
    StepOutcome out = succ_step(ctx, sliced.slices[i]);
    if (out.fail) {
      std::ostringstream os;
      os << "Fail holds at step " << i;
      return PartialCheck::fail(os.str());
    }
    NatSet next = config_to_set(ctx, out.next);
    if (below(sliced.slices[i + 1]) != next) {
      std::ostringstream os;
      os << "slice " << i + 1 << " differs from Next of slice " << i;
      return PartialCheck::fail(os.str());
    }
  }
  return {};
}

inline bool is_partial_computation(const StepContext& ctx, const NatSet& y, const Nat& t) {
  return check_partial_computation(ctx, y, t).ok;
}

/// Minimal i <= t such that Y_i is halting, or t+1 if none is.
inline Nat time_of(const Trace& tr) {
  for (std::size_t i = 0; i < tr.configs.size(); ++i)
    if (is_halting_config(tr.ctx.spec, tr.configs[i])) return Nat(i);
  return tr.t + 1;
}

/// Maximal work-tape cell visited in any configuration.
inline Nat space_of(const Trace& tr) {
  std::uint64_t best = 0;
  const unsigned k = tr.ctx.spec.k, l = tr.ctx.spec.l;
  for (const Config& c : tr.configs)
    for (unsigned t = k + l; t < tr.ctx.spec.tapes(); ++t)
      if (c.head[t] > best) best = c.head[t];
  return Nat(best);
}

/// Maximal oracle-tape cell visited in any configuration.
inline Nat query_of(const Trace& tr) {
  std::uint64_t best = 0;
  const unsigned k = tr.ctx.spec.k;
  for (const Config& c : tr.configs)
    for (unsigned t = k; t < k + tr.ctx.spec.l; ++t)
      if (c.head[t] > best) best = c.head[t];
  return Nat(best);
}

/// Set-level extractors: decode the slices of an arbitrary set. On sets that
/// are not computations these return best-effort values, never failing.
inline std::vector<Config> decode_slices(const StepContext& ctx, const NatSet& y, const Nat& t) {
  auto sliced = detail::split_slices(y, to_u64(t));
  std::vector<Config> cfgs;
  cfgs.reserve(sliced.slices.size());
  for (const NatSet& s : sliced.slices) cfgs.push_back(set_to_config(ctx, s));
  return cfgs;
}

inline Trace trace_from_set(const StepContext& ctx, const NatSet& y, const Nat& t) {
  return Trace{ctx, t, decode_slices(ctx, y, t)};
}

enum class Verdict { Accepting, Rejecting, NonHalting };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Accepting: return "accepting";
    case Verdict::Rejecting: return "rejecting";
    case Verdict::NonHalting: return "non-halting";
  }
  return "?";
}

/// Halting iff some slice up to t is halting; the halting kind is read off
/// the final configuration (halting configurations repeat).
inline Verdict classify(const Trace& tr) {
  if (time_of(tr) > tr.t) return Verdict::NonHalting;
  return tr.configs.back().state == tr.ctx.spec.accept ? Verdict::Accepting : Verdict::Rejecting;
}

/// Simulates M on x with the witnessed bounds and classifies the outcome.
/// Machines passed here are expected to halt within their declared budget.
inline Verdict classify_on(const Nat& code, const Nat& x, const WitnessTerms& wt,
                           std::vector<NatSet> oracles = {}) {
  Nat t = wt.time_bound1(x), s = wt.space_bound1(x), q = wt.query_bound1(x);
  auto tr = run(code, {x}, t, s, q, std::move(oracles));
  if (!tr) return Verdict::NonHalting;
  return classify(*tr);
}

/// One witness-validation failure.
struct WitnessViolation {
  std::vector<Nat> inputs;
  std::string what;
};

struct WitnessReport {
  bool ok = true;
  std::uint64_t checked = 0;
  std::optional<WitnessViolation> first_violation;

  void record(std::vector<Nat> inputs, std::string what) {
    if (ok) first_violation = WitnessViolation{std::move(inputs), std::move(what)};
    ok = false;
  }
};

/// Default sample grid: all inputs of at most `small_bits` bits plus `extra`
/// seeded random larger ones (per input slot; multi-input machines get the
/// grid on the first input and zeros elsewhere).
inline std::vector<std::vector<Nat>> witness_sample_grid(unsigned k, unsigned small_bits = 6,
                                                         unsigned extra = 32,
                                                         std::uint64_t seed = 0x5eedull) {
  std::vector<std::vector<Nat>> samples;
  for (std::uint64_t x = 0; x < (1ull << small_bits); ++x) {
    std::vector<Nat> in(k, Nat(0));
    in[0] = x;
    samples.push_back(std::move(in));
  }
  std::mt19937_64 rng(seed);
  for (unsigned i = 0; i < extra; ++i) {
    std::uint64_t bits = 7 + rng() % 6;
    Nat x = 0;
    for (std::uint64_t b = 0; b < bits; ++b)
      if (rng() & 1) boost::multiprecision::bit_set(x, static_cast<unsigned>(b));
    std::vector<Nat> in(k, Nat(0));
    in[0] = x;
    samples.push_back(std::move(in));
  }
  return samples;
}

/// Validates witness terms against measured behaviour: on every sample the
/// machine must satisfy time < t0, space < s0 and query < |q0| strictly. The
/// run itself uses slack bounds so a violation is observable rather than a
/// step failure.
inline WitnessReport check_witness(const Nat& code, const WitnessTerms& wt,
                                   const std::vector<std::vector<Nat>>& samples,
                                   std::vector<NatSet> oracles = {}) {
  WitnessReport rep;
  for (const auto& xs : samples) {
    Nat t0 = wt.time_bound(xs), s0 = wt.space_bound(xs), q0 = wt.query_bound(xs);
    Nat t_run = t0 + 2;
    Nat s_run = 2 * s0 + 4;
    Nat q_run = pow2(len(q0) + 2);
    ++rep.checked;
    auto meas = run_measured(StepContext::make(code, xs, s_run, q_run, oracles), t_run);
    if (meas.failed) {
      rep.record(xs, "run failed even under slack bounds");
      continue;
    }
    Nat tm = meas.time, sp = meas.space, qu = meas.query;
    if (tm >= t0) {
      std::ostringstream os;
      os << "time " << tm << " not below " << t0;
      rep.record(xs, os.str());
    } else if (sp >= s0) {
      std::ostringstream os;
      os << "space " << sp << " not below " << s0;
      rep.record(xs, os.str());
    } else if (qu >= Nat(len(q0))) {
      std::ostringstream os;
      os << "query " << qu << " not below |" << q0 << "| = " << len(q0);
      rep.record(xs, os.str());
    }
  }
  return rep;
}

}  // namespace bitbound
