#include "bitbound/fixtures.hpp"
#include "bitbound/machine.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace bitbound;

TEST_CASE("machine code round-trips") {
  for (const auto& [name, fx] : fixtures::all()) {
    INFO(name);
    auto back = decode_machine(fx.code);
    REQUIRE(back.has_value());
    CHECK(*back == fx.spec);
  }
}

TEST_CASE("non-codes decode as invalid") {
  CHECK_FALSE(decode_machine(0).has_value());
  CHECK_FALSE(decode_machine(1).has_value());
  // sweep small numbers: decode must never crash, and whatever decodes must
  // re-encode to itself
  int valid = 0;
  for (std::uint64_t n = 0; n < 5000; ++n) {
    auto spec = decode_machine(n);
    if (spec) {
      ++valid;
      CHECK(encode_machine(*spec) == Nat(n));
    }
  }
  CHECK(valid > 0);  // the degenerate two-state machines live down here
}

TEST_CASE("encode is injective on the corpus") {
  std::vector<Nat> codes;
  for (const auto& [name, fx] : fixtures::all()) codes.push_back(fx.code);
  std::sort(codes.begin(), codes.end());
  CHECK(std::adjacent_find(codes.begin(), codes.end()) == codes.end());
}

TEST_CASE("suitability") {
  const auto& parity = fixtures::get("parity");
  CHECK(is_suitable(parity.code, 1, 0));
  CHECK_FALSE(is_suitable(parity.code, 1, 1));
  CHECK_FALSE(is_suitable(parity.code, 2, 0));
  CHECK_FALSE(is_suitable(0, 1, 0));
}

TEST_CASE("code dominates configuration components") {
  for (const auto& [name, fx] : fixtures::all()) {
    INFO(name);
    auto ctx = StepContext::make(fx.code, {Nat(5)}, 4, 4);
    Config c = start_config_decoded(ctx);
    for (std::uint64_t i = 0; i < ctx.m; ++i) REQUIRE(Nat(packed_cell(fx.spec, c, i)) < fx.code);
    REQUIRE(Nat(fx.spec.nstates) <= fx.code);
  }
}

TEST_CASE("start configuration layout") {
  const auto& parity = fixtures::get("parity");
  auto ctx = StepContext::make(parity.code, {Nat(5)}, 4, 1);
  REQUIRE(ctx.m == 5);  // max{4, |5|+2, |1|}
  Config c = start_config_decoded(ctx);
  CHECK(c.state == parity.spec.start);
  CHECK(c.head[0] == 0);
  CHECK(c.sym[0][0] == SYM_MARKER);
  CHECK(c.sym[0][1] == SYM_ONE);   // 5 = 101, bit 0
  CHECK(c.sym[0][2] == SYM_ZERO);  // bit 1
  CHECK(c.sym[0][3] == SYM_ONE);   // bit 2
  CHECK(c.sym[0][4] == SYM_BLANK);

  // membership predicate agrees with the materialized set
  NatSet st = start_config(ctx);
  Nat b0 = ctx.bd0_value();
  for (Nat v = 0; v < b0; ++v) REQUIRE(start_pred(ctx, v) == st.contains(v));
  CHECK(st.max_element() < b0);
}

TEST_CASE("start configuration ignores padding cells") {
  const auto& parity = fixtures::get("parity");
  auto c4 = StepContext::make(parity.code, {Nat(5)}, 4, 1);
  auto c8 = StepContext::make(parity.code, {Nat(5)}, 8, 1);
  Config a = start_config_decoded(c4), b = start_config_decoded(c8);
  CHECK(a.state == b.state);
  CHECK(a.head == b.head);
  for (std::uint64_t i = 0; i < a.m; ++i) REQUIRE(a.sym[0][i] == b.sym[0][i]);
  for (std::uint64_t i = a.m; i < b.m; ++i) REQUIRE(b.sym[0][i] == SYM_BLANK);
}

TEST_CASE("single step of the scan machine") {
  const auto& parity = fixtures::get("parity");
  auto ctx = StepContext::make(parity.code, {Nat(5)}, 4, 1);
  StepOutcome out = succ_step(ctx, start_config(ctx));
  REQUIRE_FALSE(out.fail);
  CHECK(out.next.state == 0);   // still in the even state
  CHECK(out.next.head[0] == 1); // moved off the marker
  // set/decoded agreement
  NatSet bits = config_to_set(ctx, out.next);
  for (Nat v = 0; v < ctx.bd0_value(); ++v) REQUIRE(out.bit(ctx, v) == bits.contains(v));
}

TEST_CASE("work head leaving its bound fails") {
  const auto& copy = fixtures::get("copy");
  auto ctx = StepContext::make(copy.code, {Nat(7)}, 1, 1);
  // first step wants to move the work head to cell 1 = s
  StepOutcome out = succ_step(ctx, start_config(ctx));
  CHECK(out.fail);
  CHECK(fail_pred(ctx, start_config(ctx)));
}

TEST_CASE("halting configurations repeat") {
  const auto& parity = fixtures::get("parity");
  auto ctx = StepContext::make(parity.code, {Nat(5)}, 6, 1);
  Config c = start_config_decoded(ctx);
  for (int i = 0; i < 10; ++i) {
    StepOutcome out = succ_step_decoded(ctx, c);
    REQUIRE_FALSE(out.fail);
    c = out.next;
  }
  REQUIRE(c.state == parity.spec.reject);  // 5 has an even number of 1-bits
  StepOutcome out = succ_step_decoded(ctx, c);
  REQUIRE_FALSE(out.fail);
  CHECK(out.next == c);
}

TEST_CASE("fail decision is independent of the queried index") {
  std::mt19937_64 rng(99);
  const auto& copy = fixtures::get("copy");
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Nat> elems;
    for (int i = 0; i < 25; ++i) elems.push_back(rng() % 2000);
    NatSet x(elems);
    Nat s = 1 + rng() % 6, q = rng() % 4;
    auto ctx = StepContext::make(copy.code, {Nat(rng() % 16)}, s, q);
    StepOutcome out = succ_step(ctx, x);
    CHECK(fail_pred(ctx, x) == out.fail);
    // indices past the state slot always carry bit 0
    for (int j = 0; j < 5; ++j) {
      Nat v = pair(Nat(ctx.m + 1 + j), Nat(rng() % 50));
      REQUIRE_FALSE(out.bit(ctx, v));
      REQUIRE_FALSE(next_pred(ctx, x, v));
    }
  }
}

TEST_CASE("next bits ignore junk at or above the configuration bound") {
  const auto& parity = fixtures::get("parity");
  auto ctx = StepContext::make(parity.code, {Nat(5)}, 4, 1);
  NatSet x = start_config(ctx);
  Nat b0 = ctx.bd0_value();
  NatSet noisy = x;
  noisy.insert(b0);
  noisy.insert(b0 + 17);
  noisy.insert(b0 * 3 + 1);
  for (Nat v = 0; v < b0; ++v) REQUIRE(next_pred(ctx, x, v) == next_pred(ctx, noisy, v));
  CHECK(fail_pred(ctx, x) == fail_pred(ctx, noisy));
}

TEST_CASE("query step consults the oracle at the written number only") {
  const auto& orq = fixtures::get("oracle-probe");
  Nat q = 64;
  for (std::uint64_t x : {0ull, 3ull, 5ull}) {
    auto with = StepContext::make(orq.code, {Nat(x)}, 2, q, {NatSet{Nat(x)}});
    auto without = StepContext::make(orq.code, {Nat(x)}, 2, q,
                                     {NatSet{Nat(x + 1), Nat(x + 2)}});
    // drive to the query state
    Config c = start_config_decoded(with);
    while (c.state != orq.spec.qstate) {
      StepOutcome out = succ_step_decoded(with, c);
      REQUIRE_FALSE(out.fail);
      c = out.next;
    }
    StepOutcome yes = succ_step_decoded(with, c);
    StepOutcome no = succ_step_decoded(without, c);
    REQUIRE_FALSE(yes.fail);
    REQUIRE_FALSE(no.fail);
    CHECK(yes.next.state == orq.spec.accept);
    CHECK(no.next.state == orq.spec.reject);
  }
}

TEST_CASE("decoded configurations survive the set round-trip") {
  for (const auto& [name, fx] : fixtures::all()) {
    INFO(name);
    std::vector<NatSet> oracles(fx.spec.l, NatSet{Nat(1)});
    auto ctx = StepContext::make(fx.code, {Nat(6)}, 5, 8, oracles);
    Config c = start_config_decoded(ctx);
    for (int i = 0; i < 6; ++i) {
      REQUIRE(set_to_config(ctx, config_to_set(ctx, c)) == c);
      StepOutcome out = succ_step_decoded(ctx, c);
      if (out.fail) break;
      c = out.next;
    }
  }
}

TEST_CASE("machine validation rejects rule violations") {
  MachineSpec m = fixtures::get("parity").spec;
  m.table[0][SYM_MARKER].moves[0] = MOVE_L;
  CHECK(m.validate() == "left move on end marker");

  MachineSpec m2 = fixtures::get("parity").spec;
  m2.table[0][SYM_BLANK].moves[0] = MOVE_R;
  CHECK(m2.validate() == "right move on blank input cell");

  MachineSpec m3 = fixtures::get("copy").spec;
  m3.table[0][SYM_ZERO + 4 * SYM_BLANK].writes[0] = SYM_MARKER;
  CHECK(m3.validate() == "end marker written inside tape");

  MachineSpec m4 = fixtures::get("halt").spec;
  m4.reject = m4.accept;
  CHECK(m4.validate() == "accept and reject must differ");
}
