#include "bitbound/fixtures.hpp"
#include "bitbound/witness.hpp"
#include "shadow_sim.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace bitbound;
using namespace bitbound::witness;

namespace {

MachineRef ref_of(const std::string& name) {
  const auto& fx = fixtures::get(name);
  return MachineRef::coded(fx.code, fx.witness, fx.name);
}

}  // namespace

TEST_CASE("synthesized whole-computation witnesses verify") {
  for (const auto* name : {"halt", "parity", "loop2"}) {
    for (unsigned n : {2u, 3u}) {
      INFO(name << " n=" << n);
      Claim mu = mu_synthesize(ref_of(name), n);
      CheckResult r = mu_check(mu);
      INFO(r.detail);
      REQUIRE(r.ok);
      REQUIRE(r.size_ok);
    }
  }
}

TEST_CASE("the empty description is refuted at the first input") {
  Builder b;
  Circuit const0 = b.finish({3, 10}, b.zero());
  Claim bogus = Claim::make(ClaimKind::Mu, ref_of("parity"), 3, const0);
  CheckResult r = mu_check(bogus);
  REQUIRE_FALSE(r.ok);
  REQUIRE(r.at_x.has_value());
  CHECK(*r.at_x == 0);
  CHECK(r.detail.find("not a computation") != std::string::npos);
}

TEST_CASE("size-bound violations are reported separately") {
  Claim mu = mu_synthesize(ref_of("parity"), 2);
  mu.exponent = 1;  // claim an impossible budget: code must stay below 2^(n^1)
  CheckResult r = mu_check(mu);
  REQUIRE_FALSE(r.ok);
  REQUIRE_FALSE(r.size_ok);
}

TEST_CASE("acceptance extraction from a verified description") {
  for (const auto* name : {"halt", "rejector", "parity", "loop2"}) {
    INFO(name);
    Claim mu = mu_synthesize(ref_of(name), 2);
    REQUIRE(mu_check(mu).ok);
    Claim alpha = alpha_from_mu(mu);
    CheckResult r = alpha_check(alpha);
    INFO(r.detail);
    REQUIRE(r.ok);
  }
  // the negated circuit is wrong on every input
  Claim mu = mu_synthesize(ref_of("parity"), 2);
  Claim alpha = alpha_from_mu(mu);
  Builder b;
  Circuit neg = b.finish(alpha.circuit.input_widths,
                         b.lnot(compose_into(b, alpha.circuit, {b.word_input(0, 2)})));
  Claim flipped = Claim::make(ClaimKind::Alpha, alpha.machine, 2, neg);
  CheckResult r = alpha_check(flipped);
  REQUIRE_FALSE(r.ok);
  CHECK(*r.at_x == 0);
}

TEST_CASE("an acceptance circuit wrong at one point names it") {
  Claim alpha = alpha_from_mu(mu_synthesize(ref_of("parity"), 3));
  REQUIRE(alpha_check(alpha).ok);
  Claim bad = alpha;
  bad.circuit = corrupt_at(alpha.circuit, {Nat(6)});
  CheckResult r = alpha_check(bad);
  REQUIRE_FALSE(r.ok);
  REQUIRE(*r.at_x == 6);
}

TEST_CASE("probe-driver acceptance claims verify on reachable codes") {
  MachineRef parity = ref_of("parity");
  auto fam = accepted_probe_codes(parity, 2, wrappers::Kind::M1Star);
  Claim alpha = make_driver_alpha_claim(wrappers::Kind::M1Star, fam.accepted, fam.max_code_len, 2);
  // mixed list: accepted codes plus rejecting neighbours
  std::vector<Nat> inputs = fam.accepted;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) inputs.push_back(fam.accepted[rng() % fam.accepted.size()] + 1 + rng() % 5);
  CheckResult r = alpha_check(alpha, inputs);
  INFO(r.detail);
  REQUIRE(r.ok);
}

TEST_CASE("the full trace-decision pipeline closes") {
  for (const auto* name : {"halt", "parity"}) {
    INFO(name);
    MachineRef m = ref_of(name);
    unsigned n = 2;
    auto fam = accepted_probe_codes(m, n, wrappers::Kind::M1Star);
    Claim alpha_probe =
        make_driver_alpha_claim(wrappers::Kind::M1Star, fam.accepted, fam.max_code_len, n);
    Claim beta = beta_from_alpha(alpha_probe, m, n);
    CheckResult rb = beta_check(beta);
    INFO(rb.detail);
    REQUIRE(rb.ok);

    Claim mu = mu_from_beta(beta);
    CheckResult rm = mu_check(mu);
    INFO(rm.detail);
    REQUIRE(rm.ok);
  }
}

TEST_CASE("base case of the trace decider is the start configuration") {
  MachineRef m = ref_of("halt");
  auto fam = accepted_probe_codes(m, 2, wrappers::Kind::M1Star);
  Claim alpha_probe =
      make_driver_alpha_claim(wrappers::Kind::M1Star, fam.accepted, fam.max_code_len, 2);
  Claim beta = beta_from_alpha(alpha_probe, m, 2);
  for (std::uint64_t x = 0; x < 4; ++x) {
    StepContext ctx = StepContext::make(m.code, {Nat(x)}, m.terms.space_bound1(x),
                                        m.terms.query_bound1(x));
    NatSet start = start_config(ctx);
    for (const Nat& w : start)
      REQUIRE(eval_tuple(beta.circuit, {Nat(x), Nat(0), pair(Nat(0), w)}));
  }
}

TEST_CASE("a trace decider wrong at one position is caught with coordinates") {
  MachineRef m = ref_of("halt");
  auto fam = accepted_probe_codes(m, 2, wrappers::Kind::M1Star);
  Claim alpha_probe =
      make_driver_alpha_claim(wrappers::Kind::M1Star, fam.accepted, fam.max_code_len, 2);
  Claim beta = beta_from_alpha(alpha_probe, m, 2);
  REQUIRE(beta_check(beta).ok);

  // flip one bit of slice t+1 territory: x=2, t=1, a start element at slice 0
  StepContext ctx = StepContext::make(m.code, {Nat(2)}, 2, 2);
  Nat point = pair(Nat(1), *start_config(ctx).begin());
  Claim bad = beta;
  bad.circuit = corrupt_at(beta.circuit, {Nat(2), Nat(1), point});
  CheckResult r = beta_check(bad);
  REQUIRE_FALSE(r.ok);
  CHECK(*r.at_x == 2);
  CHECK(*r.at_t == 1);
  CHECK(*r.at_v == point);
}

TEST_CASE("single-bit corruption of verified witnesses is detected") {
  std::mt19937_64 rng(13);
  Claim mu = mu_synthesize(ref_of("parity"), 2);
  REQUIRE(mu_check(mu).ok);
  for (int trial = 0; trial < 6; ++trial) {
    std::uint64_t x = rng() % 4;
    Nat t = ref_of("parity").terms.time_bound1(x);
    StepContext ctx = StepContext::make(mu.machine.code, {Nat(x)}, t, t);
    Nat point = rng() % to_u64(ctx.bd_value(t));
    Claim bad = mu;
    bad.circuit = corrupt_at(mu.circuit, {Nat(x), point});
    CheckResult r = mu_check(bad);
    REQUIRE_FALSE(r.ok);
    REQUIRE(*r.at_x == x);
  }
}

TEST_CASE("acceptance transfer through the plain driver") {
  MachineRef parity = ref_of("parity");
  unsigned n = 2;
  Claim alpha_plain =
      make_driver_alpha_claim_by_running(wrappers::Kind::M1, plain_codes(parity, n), n);
  REQUIRE(alpha_check(alpha_plain, plain_codes(parity, n)).ok);
  Claim alpha = alpha_transfer(alpha_plain, parity, n);
  CheckResult r = alpha_check(alpha);
  INFO(r.detail);
  REQUIRE(r.ok);
  // exponent bookkeeping: the claimed exponent covers the length blow-up
  unsigned e = minimal_exponent(alpha_plain.n, n);
  REQUIRE(alpha.exponent >= e * alpha_plain.exponent);
}

TEST_CASE("trace transfer through the plain driver") {
  MachineRef parity = ref_of("parity");
  unsigned n = 2;
  Claim mu_plain = make_driver_mu_claim(wrappers::Kind::M1, plain_codes(parity, n), n);
  REQUIRE(check_driver_mu_claim(mu_plain, wrappers::Kind::M1, plain_codes(parity, n)).ok);
  Claim mu = mu_transfer(mu_plain, parity, n);
  CheckResult r = mu_check(mu);
  INFO(r.detail);
  REQUIRE(r.ok);
  REQUIRE(mu.exponent >= minimal_exponent(mu_plain.n, n) * mu_plain.exponent);
}

TEST_CASE("per-length simulation over a length list") {
  MachineRef halt = ref_of("halt");
  std::vector<std::pair<unsigned, Circuit>> lengths;
  for (unsigned n : {2u, 3u}) lengths.emplace_back(n, mu_synthesize(halt, n).circuit);
  IoMuReport rep = iomu_check(halt, lengths);
  CHECK(rep.ok);
  CHECK_FALSE(rep.vacuous);
  CHECK(rep.note.find("not finitely testable") != std::string::npos);

  // one failing length is named
  lengths[1].second = corrupt_at(lengths[1].second, {Nat(0), Nat(0)});
  IoMuReport bad = iomu_check(halt, lengths);
  REQUIRE_FALSE(bad.ok);
  CHECK(bad.per_length[0].second.ok);
  CHECK_FALSE(bad.per_length[1].second.ok);

  // the empty list is vacuously true, flagged as such
  IoMuReport empty = iomu_check(halt, {});
  CHECK(empty.ok);
  CHECK(empty.vacuous);
}

TEST_CASE("step-bound loop fixture trace bits match the reference run") {
  MachineRef loop4 = ref_of("loop4");
  Claim mu = mu_synthesize(loop4, 2);
  CheckResult r = mu_check(mu);
  INFO(r.detail);
  REQUIRE(r.ok);
}

TEST_CASE("checker agreement with the independent re-simulation") {
  for (const auto* name : {"halt", "parity"}) {
    INFO(name);
    MachineRef m = ref_of(name);
    Claim mu = mu_synthesize(m, 2);
    std::vector<std::pair<Nat, Nat>> bounds;
    for (std::uint64_t x = 0; x < 4; ++x)
      bounds.emplace_back(m.terms.time_bound1(x), m.terms.space_bound1(x));
    bool primary = mu_check(mu).ok;
    bool secondary = shadow::mu_verdict(mu.circuit, m.code, 2, bounds);
    REQUIRE(primary);
    REQUIRE(secondary);

    Claim bad = mu;
    bad.circuit = corrupt_at(mu.circuit, {Nat(1), Nat(0)});
    REQUIRE_FALSE(mu_check(bad).ok);
    REQUIRE_FALSE(shadow::mu_verdict(bad.circuit, m.code, 2, bounds));
  }
}
