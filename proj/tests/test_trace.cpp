#include "bitbound/fixtures.hpp"
#include "bitbound/trace.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace bitbound;

namespace {

StepContext parity_ctx(std::uint64_t x, Nat s = 4, Nat q = 1) {
  return StepContext::make(fixtures::get("parity").code, {Nat(x)}, s, q);
}

}  // namespace

TEST_CASE("reference runs classify by 1-bit parity") {
  auto five = run(parity_ctx(5), 12);
  REQUIRE(five.has_value());
  CHECK(classify(*five) == Verdict::Rejecting);  // 101 has two 1-bits

  auto seven = run(parity_ctx(7), 12);
  REQUIRE(seven.has_value());
  CHECK(classify(*seven) == Verdict::Accepting);  // 111 has three

  for (std::uint64_t x = 0; x < 32; ++x) {
    auto tr = run(parity_ctx(x, 8, 1), 10);
    REQUIRE(tr.has_value());
    bool odd = __builtin_popcountll(x) & 1;
    REQUIRE(classify(*tr) == (odd ? Verdict::Accepting : Verdict::Rejecting));
  }
}

TEST_CASE("loop fixture halts at its step count exactly") {
  for (unsigned steps : {2u, 4u}) {
    const auto& loop = fixtures::get("loop" + std::to_string(steps));
    auto tr = run(loop.code, {Nat(0)}, steps + 3, 2, 2);
    REQUIRE(tr.has_value());
    CHECK(time_of(*tr) == steps);
    CHECK(classify(*tr) == Verdict::Accepting);
    // below its loop count the machine has not halted yet
    auto shorter = run(loop.code, {Nat(0)}, steps - 1, 2, 2);
    REQUIRE(shorter.has_value());
    CHECK(classify(*shorter) == Verdict::NonHalting);
  }
}

TEST_CASE("insufficient space makes the run fail") {
  const auto& copy = fixtures::get("copy");
  CHECK_FALSE(run(copy.code, {Nat(7)}, 8, 2, 1).has_value());
  CHECK(run(copy.code, {Nat(7)}, 8, 8, 1).has_value());
}

TEST_CASE("reference runs satisfy the computation predicate") {
  for (const auto& [name, fx] : fixtures::all()) {
    INFO(name);
    std::vector<NatSet> oracles(fx.spec.l, NatSet{Nat(3), Nat(5)});
    for (std::uint64_t x = 0; x < 8; ++x) {
      auto ctx = StepContext::make(fx.code, {Nat(x)}, 8, 16, oracles);
      auto tr = run(ctx, 6);
      if (!tr) continue;
      auto chk = check_partial_computation(ctx, tr->to_set(), 6);
      INFO(chk.reason);
      REQUIRE(chk.ok);
    }
  }
}

TEST_CASE("single-element mutations below the bound are rejected") {
  // full sweep on the degenerate fixture, whose bound is tiny
  {
    auto ctx = StepContext::make(fixtures::get("halt").code, {Nat(0)}, 2, 2);
    Nat t = 2;
    NatSet y = run(ctx, t)->to_set();
    std::uint64_t bdv = to_u64(ctx.bd_value(t));
    for (std::uint64_t w = 0; w < bdv; ++w) {
      NatSet mutated = y;
      mutated.toggle(w);
      REQUIRE_FALSE(is_partial_computation(ctx, mutated, t));
    }
  }
  // sampled sweep on the scan machine
  {
    auto ctx = parity_ctx(5);
    Nat t = 7;
    NatSet y = run(ctx, t)->to_set();
    std::uint64_t bdv = to_u64(ctx.bd_value(t));
    std::mt19937_64 rng(17);
    for (int i = 0; i < 400; ++i) {
      NatSet mutated = y;
      mutated.toggle(rng() % bdv);
      REQUIRE_FALSE(is_partial_computation(ctx, mutated, t));
    }
    for (const Nat& e : y) {  // removing any real element breaks a conjunct
      NatSet mutated = y;
      mutated.erase(e);
      REQUIRE_FALSE(is_partial_computation(ctx, mutated, t));
    }
  }
}

TEST_CASE("junk at or above the trace bound never changes the verdict") {
  auto ctx = parity_ctx(5);
  Nat t = 7;
  auto tr = run(ctx, t);
  NatSet y = tr->to_set();
  Nat bdv = ctx.bd_value(t);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    NatSet noisy = y;
    // elements of the form <i, v> with v at or past Bd, and raw values past Bd
    noisy.insert(pair(Nat(rng() % 10), bdv + rng() % 1000));
    noisy.insert(bdv * 2 + rng() % 1000);
    REQUIRE(is_partial_computation(ctx, noisy, t));
    REQUIRE(classify(trace_from_set(ctx, noisy, t)) == classify(*tr));
  }
}

TEST_CASE("two sets passing the predicate agree below the bound") {
  auto ctx = parity_ctx(3);
  Nat t = 6;
  NatSet y = run(ctx, t)->to_set();
  // independent reconstruction, bit by bit from the predicates
  NatSet z;
  Nat b0 = ctx.bd0_value();
  for (Nat v = 0; v < b0; ++v)
    if (start_pred(ctx, v)) z.insert(pair(Nat(0), v));
  for (std::uint64_t i = 0; i < to_u64(t); ++i) {
    NatSet si = z.slice(i);
    for (Nat v = 0; v < b0; ++v)
      if (next_pred(ctx, si, v)) z.insert(pair(Nat(i + 1), v));
  }
  REQUIRE(is_partial_computation(ctx, z, t));
  Nat bdv = ctx.bd_value(t);
  for (const Nat& e : y)
    if (e < bdv) REQUIRE(z.contains(e));
  for (const Nat& e : z)
    if (e < bdv) REQUIRE(y.contains(e));
}

TEST_CASE("prefixes of valid traces are valid") {
  auto ctx = parity_ctx(5);
  auto tr = run(ctx, 9);
  NatSet y = tr->to_set();
  for (std::uint64_t tp : {0ull, 3ull, 6ull}) {
    NatSet prefix;
    for (const Nat& e : y)
      if (unpair(e).first <= tp) prefix.insert(e);
    REQUIRE(is_partial_computation(ctx, prefix, tp));
  }
}

TEST_CASE("resource extraction") {
  // a machine that never moves its work head uses no space
  const auto& loop = fixtures::get("loop4");
  auto tr = run(loop.code, {Nat(0)}, 5, 3, 3);
  REQUIRE(tr.has_value());
  CHECK(space_of(*tr) == 0);
  CHECK(query_of(*tr) == 0);  // no oracle tapes

  const auto& copy = fixtures::get("copy");
  auto tc = run(copy.code, {Nat(13)}, 9, 9, 1);
  REQUIRE(tc.has_value());
  CHECK(time_of(*tc) == len(13) + 2);
  CHECK(space_of(*tc) == len(13) + 1);
}

TEST_CASE("witness validation on the sample grid") {
  const auto& parity = fixtures::get("parity");
  // a dominating bound passes everywhere
  Term big = Term::constant(4) * (Term::var().length() + 2) * (Term::var().length() + 2);
  auto rep = check_witness(parity.code, WitnessTerms::exp(big), witness_sample_grid(1));
  CHECK(rep.ok);
  CHECK(rep.checked == 96);

  // |x| is already too small at x = 1
  auto bad = check_witness(parity.code, WitnessTerms::exp(Term::var().length()),
                           witness_sample_grid(1));
  REQUIRE_FALSE(bad.ok);
  REQUIRE(bad.first_violation.has_value());

  // every corpus fixture passes with its declared terms
  for (const auto& [name, fx] : fixtures::all()) {
    INFO(name);
    std::vector<NatSet> oracles(fx.spec.l, NatSet{Nat(3)});
    auto r = check_witness(fx.code, fx.witness, witness_sample_grid(fx.spec.k), oracles);
    if (!r.ok) { INFO(r.first_violation->what); }
    REQUIRE(r.ok);
  }
}

TEST_CASE("query budgets compare against the length of the bound") {
  const auto& orq = fixtures::get("oracle-probe");
  // q0 = 3 gives |q0| = 2; the probe writes |x|+1 cells
  WitnessTerms tight = WitnessTerms::general(Term::var().length() + 4,
                                             Term::constant(2), Term::constant(3));
  auto rep = check_witness(orq.code, tight, witness_sample_grid(1), {NatSet{}});
  REQUIRE_FALSE(rep.ok);
  CHECK(rep.first_violation->what.find("query") != std::string::npos);

  WitnessTerms roomy = WitnessTerms::general(
      Term::var().length() + 4, Term::constant(2),
      Term::constant(4) * Term::constant(1).smash(Term::var()));
  CHECK(check_witness(orq.code, roomy, witness_sample_grid(1), {NatSet{}}).ok);
}

TEST_CASE("classification is stable under junk and non-halting runs report it") {
  const auto& loop = fixtures::get("loop4");
  // bound smaller than the loop count: not halted within the declared time
  auto tr = run(loop.code, {Nat(0)}, 3, 2, 2);
  REQUIRE(tr.has_value());
  CHECK(classify(*tr) == Verdict::NonHalting);
}
