#pragma once

#include "bitbound/parallel.hpp"
#include "bitbound/synth.hpp"
#include "bitbound/wrappers.hpp"

#include <random>
#include <sstream>

namespace bitbound::witness {

/// The machine a claim speaks about: either a coded machine with its
/// resource terms, or one of the universal drivers.
struct MachineRef {
  bool is_driver = false;
  Nat code;
  WitnessTerms terms;
  wrappers::Kind driver = wrappers::Kind::M1;
  std::string label;

  static MachineRef coded(Nat code, WitnessTerms wt, std::string label = "") {
    MachineRef r;
    r.code = std::move(code);
    r.terms = std::move(wt);
    r.label = std::move(label);
    return r;
  }
  static MachineRef of_driver(wrappers::Kind k) {
    MachineRef r;
    r.is_driver = true;
    r.driver = k;
    r.label = wrappers::name(k);
    return r;
  }

  bool accepts(const Nat& x) const {
    if (is_driver) return wrappers::run_driver(driver, x).accept;
    return classify_on(code, x, terms) == Verdict::Accepting;
  }
};

enum class ClaimKind { Mu, Alpha, Beta };

inline const char* to_string(ClaimKind k) {
  switch (k) {
    case ClaimKind::Mu: return "mu";
    case ClaimKind::Alpha: return "alpha";
    case ClaimKind::Beta: return "beta";
  }
  return "?";
}

/// Minimal c >= 1 with bits <= n^c.
inline unsigned minimal_exponent(std::uint64_t bits, unsigned n) {
  Nat p = 1;
  for (unsigned c = 1; c < 64; ++c) {
    p *= n;
    if (p >= bits) return c;
  }
  return 64;
}

/// One per-length witness: a circuit claimed to describe computations (mu),
/// decide acceptance (alpha), or decide trace bits uniformly in the time
/// parameter (beta), for inputs of length n.
struct Claim {
  ClaimKind kind = ClaimKind::Mu;
  MachineRef machine;
  unsigned n = 2;
  Circuit circuit;
  unsigned exponent = 1;  // claimed c: code < 2^(n^c), machine-checked

  Nat code() const { return encode_circuit(circuit); }

  static Claim make(ClaimKind kind, MachineRef m, unsigned n, Circuit c,
                    unsigned at_least_exponent = 1) {
    Claim cl;
    cl.kind = kind;
    cl.machine = std::move(m);
    cl.n = n;
    cl.circuit = std::move(c);
    std::uint64_t bits = len(cl.code());
    cl.exponent = std::max(minimal_exponent(bits, n), at_least_exponent);
    return cl;
  }
};

struct CheckResult {
  bool ok = true;
  bool size_ok = true;
  std::string detail;
  std::optional<Nat> at_x, at_t, at_v;

  static CheckResult fail(std::string d, std::optional<Nat> x = {}, std::optional<Nat> t = {},
                          std::optional<Nat> v = {}) {
    CheckResult r;
    r.ok = false;
    r.detail = std::move(d);
    r.at_x = std::move(x);
    r.at_t = std::move(t);
    r.at_v = std::move(v);
    return r;
  }
};

namespace detail {

inline bool size_within(const Claim& c) {
  return Nat(len(c.code())) <= [&] {
    Nat p = 1;
    for (unsigned i = 0; i < c.exponent; ++i) p *= c.n;
    return p;
  }();
}

/// Merges per-x results deterministically: the smallest failing x wins.
struct GridCollector {
  std::vector<std::optional<CheckResult>> slots;
  explicit GridCollector(std::uint64_t n) : slots(n) {}
  CheckResult reduce() {
    for (auto& s : slots)
      if (s && !s->ok) return *s;
    return {};
  }
};

}  // namespace detail

inline constexpr std::uint64_t kMaxEnumeratedLength = 20;  // guard on 2^n sweeps

/// mu: for every x < 2^n the restricted circuit's truth table below the
/// trace bound is exactly the halting computation of M on x.
inline CheckResult mu_check(const Claim& claim) {
  if (claim.kind != ClaimKind::Mu) return CheckResult::fail("not a mu claim");
  if (claim.machine.is_driver) return CheckResult::fail("driver claims need the probe checker");
  if (claim.n < 2) return CheckResult::fail("the length parameter must exceed 1");
  if (claim.n > kMaxEnumeratedLength) return CheckResult::fail("length beyond the sweep guard");
  CheckResult sized;
  if (!detail::size_within(claim)) {
    sized.size_ok = false;
    sized.ok = false;
    sized.detail = "circuit code exceeds the claimed size bound";
    return sized;
  }
  const Nat& code = claim.machine.code;
  const WitnessTerms& wt = claim.machine.terms;
  std::uint64_t xs = 1ull << claim.n;
  detail::GridCollector grid(xs);
  parallel_for(xs, [&](std::uint64_t x) {
    Nat t = wt.time_bound1(x), s = wt.space_bound1(x), q = wt.query_bound1(x);
    StepContext ctx = StepContext::make(code, {Nat(x)}, s, q);
    Nat bdv = ctx.bd_value(t);
    Circuit cx = restrict_circuit(claim.circuit, {Nat(x)});
    SweepEval ev(cx, {});
    std::vector<Nat> elems;
    for (std::uint64_t v : ev.accepted_below(to_u64(bdv))) elems.push_back(v);
    NatSet got(std::move(elems));
    auto chk = check_partial_computation(ctx, got, t);
    if (!chk.ok) {
      grid.slots[x] = CheckResult::fail("described set is not a computation: " + chk.reason,
                                        Nat(x));
      return;
    }
    Trace tr = trace_from_set(ctx, got, t);
    if (time_of(tr) > t) {
      grid.slots[x] = CheckResult::fail("described computation does not halt", Nat(x));
      return;
    }
  });
  return grid.reduce();
}

/// alpha: the circuit decides acceptance. Inputs default to all x < 2^n;
/// driver claims supply an explicit input list instead (their input space is
/// astronomically larger than any sweep).
inline CheckResult alpha_check(const Claim& claim, const std::vector<Nat>& inputs = {}) {
  if (claim.kind != ClaimKind::Alpha) return CheckResult::fail("not an alpha claim");
  if (claim.n < 2) return CheckResult::fail("the length parameter must exceed 1");
  if (!detail::size_within(claim)) {
    CheckResult r;
    r.ok = false;
    r.size_ok = false;
    r.detail = "circuit code exceeds the claimed size bound";
    return r;
  }
  std::vector<Nat> xs = inputs;
  if (xs.empty()) {
    if (claim.machine.is_driver)
      return CheckResult::fail("driver claims need an explicit input list");
    if (claim.n > kMaxEnumeratedLength) return CheckResult::fail("length beyond the sweep guard");
    for (std::uint64_t x = 0; x < (1ull << claim.n); ++x) xs.push_back(x);
  }
  detail::GridCollector grid(xs.size());
  parallel_for(xs.size(), [&](std::uint64_t i) {
    const Nat& x = xs[i];
    if (Nat(len(x)) > Nat(claim.n)) {
      grid.slots[i] = CheckResult::fail("input longer than the claim length", x);
      return;
    }
    bool by_circuit = eval_tuple(claim.circuit, {x});
    bool by_machine = claim.machine.accepts(x);
    if (by_circuit != by_machine)
      grid.slots[i] = CheckResult::fail(by_circuit ? "circuit accepts a rejected input"
                                                   : "circuit rejects an accepted input",
                                        x);
  });
  return grid.reduce();
}

/// beta: a single circuit decides every trace bit of every partial time-t
/// computation up to the machine's time bound, uniformly in t.
inline CheckResult beta_check(const Claim& claim) {
  if (claim.kind != ClaimKind::Beta) return CheckResult::fail("not a beta claim");
  if (claim.machine.is_driver) return CheckResult::fail("beta claims target coded machines");
  if (claim.n < 2) return CheckResult::fail("the length parameter must exceed 1");
  if (claim.n > kMaxEnumeratedLength) return CheckResult::fail("length beyond the sweep guard");
  if (!detail::size_within(claim)) {
    CheckResult r;
    r.ok = false;
    r.size_ok = false;
    r.detail = "circuit code exceeds the claimed size bound";
    return r;
  }
  const Nat& code = claim.machine.code;
  const WitnessTerms& wt = claim.machine.terms;
  std::vector<std::pair<std::uint64_t, Nat>> cells;
  for (std::uint64_t x = 0; x < (1ull << claim.n); ++x)
    for (Nat t = 0; t <= wt.time_bound1(x); ++t) cells.emplace_back(x, t);
  detail::GridCollector grid(cells.size());
  parallel_for(cells.size(), [&](std::uint64_t i) {
    const auto& [x, t] = cells[i];
    StepContext ctx = StepContext::make(code, {Nat(x)}, wt.space_bound1(x), wt.query_bound1(x));
    auto tr = run(ctx, t);
    if (!tr) {
      grid.slots[i] = CheckResult::fail("reference run failed", Nat(x), t);
      return;
    }
    NatSet y = tr->to_set();
    Nat bdv = ctx.bd_value(t);
    SweepEval ev(claim.circuit, {Nat(x), t});
    std::vector<Nat> elems;
    for (std::uint64_t v : ev.accepted_below(to_u64(bdv))) elems.push_back(v);
    NatSet got(std::move(elems));
    NatSet expect;
    for (const Nat& e : y)
      if (e < bdv) expect.insert(e);
    if (!(got == expect)) {
      // report the smallest disagreeing position
      for (Nat v = 0; v < bdv; ++v)
        if (got.contains(v) != expect.contains(v)) {
          grid.slots[i] = CheckResult::fail("trace bit differs", Nat(x), t, v);
          return;
        }
    }
  });
  return grid.reduce();
}

struct IoMuReport {
  bool ok = true;
  bool vacuous = false;
  std::string note;
  std::vector<std::pair<unsigned, CheckResult>> per_length;
};

/// io variant: the per-length checker over a finite length list. Only the
/// listed lengths are testable; recurrence beyond every bound is a statement
/// about infinitely many lengths and has no finite test.
inline IoMuReport iomu_check(const MachineRef& m, const std::vector<std::pair<unsigned, Circuit>>& lengths) {
  IoMuReport rep;
  rep.note = "per-length check only; unbounded recurrence of lengths is not finitely testable";
  if (lengths.empty()) {
    rep.vacuous = true;
    return rep;
  }
  for (const auto& [n, circuit] : lengths) {
    Claim cl = Claim::make(ClaimKind::Mu, m, n, circuit);
    CheckResult r = mu_check(cl);
    if (!r.ok) rep.ok = false;
    rep.per_length.emplace_back(n, std::move(r));
  }
  return rep;
}

/// Direct synthesis of a mu witness: the layered construction compiled from
/// the machine's own step structure.
inline Claim mu_synthesize(const MachineRef& m, unsigned n) {
  if (m.is_driver) throw std::invalid_argument("mu_synthesize: coded machines only");
  auto spec = decode_machine(m.code);
  if (!spec) throw std::invalid_argument("mu_synthesize: invalid machine code");
  auto grid = synth::LengthGrid::make(*spec, m.code, m.terms, n);
  synth::Tableau tab(grid);
  return Claim::make(ClaimKind::Mu, m, n, tab.membership_circuit());
}

/// Acceptance extraction (the mu -> alpha direction): composes the claimed
/// trace-describing circuit with the circuit that reads the final state and
/// compares it with the accepting state.
inline Claim alpha_from_mu(const Claim& mu) {
  if (mu.kind != ClaimKind::Mu) throw std::invalid_argument("alpha_from_mu: mu claim expected");
  auto spec = decode_machine(mu.machine.code);
  if (!spec) throw std::invalid_argument("alpha_from_mu: invalid machine code");
  const WitnessTerms& wt = mu.machine.terms;
  const unsigned SW = spec->state_bits();

  Builder b;
  Builder::Word x = b.word_input(0, mu.n);
  Builder::Wire out = b.zero();
  for (unsigned L = 0; L <= mu.n; ++L) {
    Builder::Wire len_is = b.one();
    for (unsigned j = 0; j < mu.n; ++j) {
      if (j + 1 == L) len_is = b.land(len_is, x[j]);
      else if (j + 1 > L) len_is = b.land(len_is, b.lnot(x[j]));
    }
    Nat rep = L == 0 ? Nat(0) : pow2(L) - 1;
    Nat t_L = wt.time_bound1(rep);
    std::uint64_t m_L = config_width({rep}, wt.space_bound1(rep), wt.query_bound1(rep));
    // state bits of the t_M(x)-th configuration, read off the described set
    Builder::Wire acc = b.one();
    for (unsigned j = 0; j < SW; ++j) {
      Nat probe = pair(t_L, pair(Nat(m_L), Nat(j)));
      Builder::Wire bitw = compose_into(b, mu.circuit, {Builder::Word(x), probe});
      acc = b.land(acc, (spec->accept >> j) & 1 ? bitw : b.lnot(bitw));
    }
    out = b.lor(out, b.land(len_is, acc));
  }
  return Claim::make(ClaimKind::Alpha, mu.machine, mu.n, b.finish({mu.n}, out));
}

/// The probing-driver codes accepted over machine M at length n: one code
/// <M, x, t, v, t_M(x)> per element v of each reference computation. Every
/// other reachable code is rejected by the driver.
struct ProbeCodeFamily {
  std::vector<Nat> accepted;
  std::uint64_t max_code_len = 1;  // over the whole reachable code range
};

inline ProbeCodeFamily accepted_probe_codes(const MachineRef& m, unsigned n,
                                            wrappers::Kind kind) {
  ProbeCodeFamily fam;
  bool log_space = kind == wrappers::Kind::M2Star;
  for (std::uint64_t x = 0; x < (1ull << n); ++x) {
    Nat t_M = m.terms.time_bound1(x);
    Nat space = log_space ? Nat(len(t_M)) : t_M;
    StepContext ctx = StepContext::make(m.code, {Nat(x)}, space, t_M);
    for (Nat t = 0; t <= t_M; ++t) {
      auto tr = run(ctx, t);
      if (!tr) throw std::invalid_argument("probe codes: reference run failed");
      Nat bdv = ctx.bd_value(t);
      for (const Nat& v : tr->to_set())
        if (v < bdv) fam.accepted.push_back(tuple_code({m.code, Nat(x), t, v, t_M}));
      Nat z_max = tuple_code({m.code, Nat(x), t, bdv - 1, t_M});
      fam.max_code_len = std::max(fam.max_code_len, len(z_max));
    }
  }
  return fam;
}

/// An alpha claim for a driver: the disjunction of the given accepted
/// codes. Its length parameter covers max_code_len; on any other reachable
/// code the circuit answers 0, matching the driver's rejection. The full
/// input space of a driver admits no sweep, so verification runs on
/// explicit input lists.
inline Claim make_driver_alpha_claim(wrappers::Kind kind, const std::vector<Nat>& accepted,
                                     std::uint64_t max_code_len, unsigned length_exponent_base) {
  unsigned f = minimal_exponent(max_code_len + 1, length_exponent_base);
  Nat m_len = 1;
  for (unsigned i = 0; i < f; ++i) m_len *= length_exponent_base;
  unsigned width = static_cast<unsigned>(to_u64(m_len));

  Builder b;
  Builder::Word z = b.word_input(0, width);
  Builder::Wire out = b.zero();
  for (const Nat& zc : accepted) out = b.lor(out, b.eq_const(z, zc));
  return Claim::make(ClaimKind::Alpha, MachineRef::of_driver(kind), width, b.finish({width}, out));
}

/// Convenience for small reachable sets: runs the driver on each code.
inline Claim make_driver_alpha_claim_by_running(wrappers::Kind kind, const std::vector<Nat>& codes,
                                                unsigned length_exponent_base) {
  std::vector<Nat> accepted;
  std::uint64_t maxlen = 1;
  for (const Nat& z : codes) {
    maxlen = std::max(maxlen, len(z));
    if (wrappers::run_driver(kind, z).accept) accepted.push_back(z);
  }
  return make_driver_alpha_claim(kind, accepted, maxlen, length_exponent_base);
}

/// First half of the acceptance-to-trace direction: composes the packing
/// circuit for <M, x, t, v, t_M(x)> with an alpha circuit for the probing
/// driver, yielding a trace-bit decider uniform in t.
inline Claim beta_from_alpha(const Claim& alpha_probe, const MachineRef& target, unsigned n) {
  if (alpha_probe.kind != ClaimKind::Alpha || !alpha_probe.machine.is_driver)
    throw std::invalid_argument("beta_from_alpha: driver alpha claim expected");
  auto grid = synth::LengthGrid::make(*decode_machine(target.code), target.code, target.terms, n);
  bool log_space = alpha_probe.machine.driver == wrappers::Kind::M2Star;

  unsigned tbits = static_cast<unsigned>(len_u64(grid.t_max)) + 1;
  unsigned vbits = static_cast<unsigned>(len(grid.bd_max)) + 1;

  Builder b;
  Builder::Word x = b.word_input(0, n);
  Builder::Word t = b.word_input(1, tbits);
  Builder::Word v = b.word_input(2, vbits);
  // t_M(x) as wires, then the nested pairing <M, x, t, v, t_M(x)>
  Builder::Word tm = b.term_word(target.terms.t_M, {x});
  if (target.terms.kind == WitnessTerms::Kind::General)
    throw std::invalid_argument("beta_from_alpha: single-term bounds expected");
  Builder::Word inner = b.pair_words(v, tm);
  inner = b.pair_words(t, inner);
  inner = b.pair_words(x, inner);
  Builder::Word z = b.pair_words(b.word_const(target.code, len(target.code)), inner);
  Builder::Wire out = compose_into(b, alpha_probe.circuit, {z});
  (void)log_space;
  return Claim::make(ClaimKind::Beta, target, n, b.finish({n, tbits, vbits}, out));
}

/// Second half: fixes the time block to the machine's bound per input
/// length. The construction re-verifies the base case directly (the t = 0
/// slice equals the start configuration) instead of assuming it.
inline Claim mu_from_beta(const Claim& beta) {
  if (beta.kind != ClaimKind::Beta) throw std::invalid_argument("mu_from_beta: beta claim expected");
  const WitnessTerms& wt = beta.machine.terms;
  unsigned n = beta.n;

  Builder b;
  Builder::Word x = b.word_input(0, n);
  unsigned vbits = beta.circuit.input_widths.at(2);
  Builder::Word v = b.word_input(1, vbits);
  Builder::Wire out = b.zero();
  for (unsigned L = 0; L <= n; ++L) {
    Builder::Wire len_is = b.one();
    for (unsigned j = 0; j < n; ++j) {
      if (j + 1 == L) len_is = b.land(len_is, x[j]);
      else if (j + 1 > L) len_is = b.land(len_is, b.lnot(x[j]));
    }
    Nat t_L = wt.time_bound1(L == 0 ? Nat(0) : pow2(L) - 1);
    Builder::Wire branch =
        compose_into(b, beta.circuit, {Builder::Word(x), t_L, Builder::Word(v)});
    out = b.lor(out, b.land(len_is, branch));
  }
  Claim mu = Claim::make(ClaimKind::Mu, beta.machine, n, b.finish({n, vbits}, out));

  // base case of the inductive reading: the t = 0 slice is Start
  std::atomic<bool> base_bad{false};
  parallel_for(1ull << n, [&](std::uint64_t xv) {
    StepContext ctx = StepContext::make(beta.machine.code, {Nat(xv)}, wt.space_bound1(xv),
                                        wt.query_bound1(xv));
    NatSet start = start_config(ctx);
    SweepEval ev(beta.circuit, {Nat(xv), Nat(0)});
    for (std::uint64_t vv : ev.accepted_below(to_u64(ctx.bd_value(0)))) {
      auto [i, w] = unpair(Nat(vv));
      if (i != 0 || !start.contains(w)) base_bad = true;
    }
    for (const Nat& w : start)
      if (!eval_tuple(beta.circuit, {Nat(xv), Nat(0), pair(Nat(0), w)})) base_bad = true;
  });
  if (base_bad)
    throw std::invalid_argument("mu_from_beta: base case differs from the start configuration");
  return mu;
}

/// The reachable plain-driver codes <M, x, t_M(x)> at length n.
inline std::vector<Nat> plain_codes(const MachineRef& m, unsigned n) {
  std::vector<Nat> zs;
  for (std::uint64_t x = 0; x < (1ull << n); ++x)
    zs.push_back(tuple_code({m.code, Nat(x), m.terms.time_bound1(x)}));
  return zs;
}

/// Acceptance transfer through the plain driver: C(x) = C'(<M, x, t_M(x)>).
inline Claim alpha_transfer(const Claim& alpha_plain, const MachineRef& target, unsigned n) {
  if (alpha_plain.kind != ClaimKind::Alpha || !alpha_plain.machine.is_driver)
    throw std::invalid_argument("alpha_transfer: driver alpha claim expected");
  Builder b;
  Builder::Word x = b.word_input(0, n);
  Builder::Word tm = b.term_word(target.terms.t_M, {x});
  Builder::Word z = b.pair_words(x, tm);
  z = b.pair_words(b.word_const(target.code, len(target.code)), z);
  Builder::Wire out = compose_into(b, alpha_plain.circuit, {z});
  unsigned e = minimal_exponent(alpha_plain.n, n);
  return Claim::make(ClaimKind::Alpha, target, n, b.finish({n}, out),
                     e * alpha_plain.exponent + 1);
}

/// A mu claim for a plain driver over a reachable-code list: the circuit
/// decides membership in the driver's own computation records.
inline Claim make_driver_mu_claim(wrappers::Kind kind, const std::vector<Nat>& codes,
                                  unsigned length_exponent_base) {
  std::uint64_t max_zlen = 1;
  Nat max_elem = 0;
  std::vector<std::pair<Nat, NatSet>> records;
  for (const Nat& z : codes) {
    max_zlen = std::max(max_zlen, len(z));
    wrappers::DriverRun r = wrappers::run_driver(kind, z);
    if (!r.core) continue;
    wrappers::DriverTrace d{z, wrappers::prefix_steps(z),
                            wrappers::suffix_steps(z, r.core->sched.s0), *r.core, r.accept};
    NatSet set = d.to_set();
    if (set.max_element() > max_elem) max_elem = set.max_element();
    records.emplace_back(z, std::move(set));
  }
  unsigned f = minimal_exponent(max_zlen + 1, length_exponent_base);
  Nat m_len = 1;
  for (unsigned i = 0; i < f; ++i) m_len *= length_exponent_base;
  unsigned zwidth = static_cast<unsigned>(to_u64(m_len));
  unsigned vwidth = static_cast<unsigned>(len(max_elem)) + 1;

  Builder b;
  Builder::Word z = b.word_input(0, zwidth);
  Builder::Word v = b.word_input(1, vwidth);
  Builder::Wire out = b.zero();
  for (const auto& [zc, set] : records) {
    Builder::Wire zeq = b.eq_const(z, zc);
    Builder::Wire any = b.zero();
    for (const Nat& e : set) any = b.lor(any, b.eq_const(v, e));
    out = b.lor(out, b.land(zeq, any));
  }
  return Claim::make(ClaimKind::Mu, MachineRef::of_driver(kind), zwidth,
                     b.finish({zwidth, vwidth}, out));
}

/// Spot verification of a driver mu claim on its reachable codes: every
/// record element is described, seeded non-elements are not.
inline CheckResult check_driver_mu_claim(const Claim& claim, wrappers::Kind kind,
                                         const std::vector<Nat>& codes,
                                         std::uint64_t seed = 0x77) {
  std::mt19937_64 rng(seed);
  for (const Nat& z : codes) {
    wrappers::DriverRun r = wrappers::run_driver(kind, z);
    if (!r.core) continue;
    wrappers::DriverTrace d{z, wrappers::prefix_steps(z),
                            wrappers::suffix_steps(z, r.core->sched.s0), *r.core, r.accept};
    NatSet set = d.to_set();
    for (const Nat& e : set)
      if (!eval_tuple(claim.circuit, {z, e}))
        return CheckResult::fail("record element not described", z, {}, e);
    Nat cap = set.max_element() + 2;
    for (int probe = 0; probe < 200; ++probe) {
      Nat v = Nat(rng()) % cap;
      if (set.contains(v)) continue;
      if (eval_tuple(claim.circuit, {z, v}))
        return CheckResult::fail("non-element described", z, {}, v);
    }
  }
  return {};
}

/// Trace transfer through the plain driver (the mu half): the target bit v
/// is read off the driver's record at the same position, with the final
/// repeated configuration folded back onto the last simulated round.
inline Claim mu_transfer(const Claim& mu_plain, const MachineRef& target, unsigned n) {
  if (mu_plain.kind != ClaimKind::Mu || !mu_plain.machine.is_driver)
    throw std::invalid_argument("mu_transfer: driver mu claim expected");
  auto spec = decode_machine(target.code);
  auto grid = synth::LengthGrid::make(*spec, target.code, target.terms, n);
  const unsigned SB = spec->sym_bits();
  unsigned vbits = static_cast<unsigned>(len(grid.bd_max)) + 1;

  Builder b;
  Builder::Word x = b.word_input(0, n);
  Builder::Word v = b.word_input(1, vbits);
  Builder::Word tm = b.term_word(target.terms.t_M, {x});
  Builder::Word z = b.pair_words(x, tm);
  z = b.pair_words(b.word_const(target.code, len(target.code)), z);

  Builder::Wire out = b.zero();
  for (unsigned L = 0; L <= n; ++L) {
    Builder::Wire len_is = b.one();
    for (unsigned j = 0; j < n; ++j) {
      if (j + 1 == L) len_is = b.land(len_is, x[j]);
      else if (j + 1 > L) len_is = b.land(len_is, b.lnot(x[j]));
    }
    std::uint64_t t_L = grid.t_L[L], m_L = grid.m_L[L];
    for (std::uint64_t u = 0; u <= t_L; ++u) {
      // the driver's record holds rounds 0..t_L-1; the final configuration
      // of the target's halting computation repeats round t_L-1
      std::uint64_t record_u = u == t_L ? t_L - 1 : u;
      std::uint64_t jmax = std::max<std::uint64_t>(spec->tapes() * (SB + 1), spec->state_bits());
      for (std::uint64_t i = 0; i <= m_L; ++i)
        for (std::uint64_t j = 0; j < jmax; ++j) {
          if (i == m_L && j >= spec->state_bits()) continue;
          if (i < m_L && j >= spec->tapes() * (SB + 1)) continue;
          Nat pos = pair(Nat(u), pair(Nat(i), Nat(j)));
          Nat record_pos = pair(Nat(record_u), pair(Nat(i), Nat(j)));
          Builder::Wire bitw = compose_into(b, mu_plain.circuit, {z, record_pos});
          out = b.lor(out, b.all({len_is, b.eq_const(v, pos), bitw}));
        }
    }
  }
  unsigned e = minimal_exponent(mu_plain.n, n);
  return Claim::make(ClaimKind::Mu, target, n, b.finish({n, vbits}, out),
                     e * mu_plain.exponent + 1);
}

/// Flips a single truth-table position: the returned circuit differs from c
/// exactly at `point` (given per block).
inline Circuit corrupt_at(const Circuit& c, const std::vector<Nat>& point) {
  Builder b;
  std::vector<BlockBinding> binds;
  std::vector<Builder::Word> words;
  for (std::size_t blk = 0; blk < c.input_widths.size(); ++blk)
    words.push_back(b.word_input(static_cast<std::uint32_t>(blk), c.input_widths[blk]));
  for (auto& w : words) binds.emplace_back(w);
  Builder::Wire base = compose_into(b, c, binds);
  Builder::Wire at = b.one();
  for (std::size_t blk = 0; blk < words.size(); ++blk)
    at = b.land(at, b.eq_const(words[blk], point.at(blk)));
  return b.finish(c.input_widths, b.lxor(base, at));
}

}  // namespace bitbound::witness
