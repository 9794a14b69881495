#include "bitbound/fixtures.hpp"
#include "bitbound/universal.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace bitbound;

namespace {

struct Cell {
  std::string fixture;
  std::uint64_t x, t, s, q;
  std::vector<NatSet> oracles;
};

std::vector<Cell> small_grid() {
  return {
      {"halt", 0, 2, 2, 2, {}},
      {"halt", 0, 1, 2, 3, {}},
      {"rejector", 0, 2, 2, 2, {}},
      {"parity", 5, 8, 4, 1, {}},
      {"parity", 7, 12, 4, 1, {}},
      {"parity", 3, 6, 8, 2, {}},
      {"loop4", 0, 5, 2, 2, {}},
      {"loop2", 1, 4, 3, 3, {}},
      {"copy", 13, 9, 9, 1, {}},
      {"copy", 7, 8, 3, 1, {}},  // space-starved: the flag goes up
      {"oracle-probe", 5, 9, 2, 64, {NatSet{Nat(5)}}},
      {"oracle-probe", 5, 9, 2, 64, {NatSet{Nat(6)}}},
      {"counter", 3, 30, 6, 40, {}},
  };
}

UTrace run_cell(const Cell& c, URunOptions opt = {.watch = {}, .record_fill_starts = true,
                                                  .verify_substeps = true}) {
  const auto& fx = fixtures::get(c.fixture);
  return u_run(fx.code, {Nat(c.x)}, c.t, c.s, c.q, c.oracles, opt);
}

bool same_semantics(const UTrace& a, const UTrace& b) {
  return a.suitable == b.suitable && a.accept == b.accept && a.round_tape == b.round_tape &&
         a.round_start == b.round_start && a.total_time == b.total_time &&
         a.flag_after_round == b.flag_after_round;
}

}  // namespace

TEST_CASE("timing identities from raw parts") {
  // s0 = 5 (|s0| = 3), |t0| = 4, |t| = 2
  Schedule sc = schedule_from_parts(5, 8, 2, 100, 10);
  CHECK(sc.t1 == 48);
  CHECK(sc.t2 == 198);
  CHECK(sc.t3 == 207);
  CHECK(sc.t4 == 1049);
  CHECK(sc.q0_wrap == 7);
  CHECK(sc.t5 == 100 + 2 * 1049 + 7);
  CHECK(sc.r_u(1) - sc.r_u(0) == sc.t4);
  CHECK(sc.r_ui(0, 0) == sc.r_u(0) + 1);
  CHECK(sc.r_uij(0, 0, 1) - sc.r_uij(0, 0, 0) == sc.t1);
  CHECK(sc.r_uijp(0, 0, 0, 1) - sc.r_uijp(0, 0, 0, 0) == 2 * Nat(len(Nat(5))) + 2);
}

TEST_CASE("measured phase boundaries equal the closed forms") {
  for (const Cell& c : small_grid()) {
    INFO(c.fixture << " x=" << c.x << " t=" << c.t);
    UTrace z = run_cell(c);
    REQUIRE(z.suitable);
    Schedule sc = z.sched;
    REQUIRE(z.round_start.size() == c.t + 1);
    for (std::uint64_t u = 0; u <= c.t; ++u) REQUIRE(Nat(z.round_start[u]) == sc.r_u(u));
    for (std::uint64_t u = 0; u < c.t; ++u) {
      REQUIRE(z.fill_start[u].size() == to_u64(sc.s0));
      for (std::uint64_t i = 0; i < z.fill_start[u].size(); i += 97)
        REQUIRE(Nat(z.fill_start[u][i]) == sc.r_ui(u, i));
    }
    REQUIRE(Nat(z.total_time) == sc.t5);
    REQUIRE(z.substep_mismatches == 0);
    REQUIRE(z.query_read_mismatches == 0);
    REQUIRE(z.substep_checks == c.t * to_u64(sc.s0) * len(sc.t0));
    // rounds are uniform
    for (std::uint64_t u = 0; u < c.t; ++u)
      REQUIRE(z.round_start[u + 1] - z.round_start[u] == to_u64(sc.t4));
    REQUIRE(validate_utrace(z, c.oracles).empty());
  }
}

TEST_CASE("verdict equals the reference simulation") {
  for (const Cell& c : small_grid()) {
    INFO(c.fixture << " x=" << c.x << " t=" << c.t);
    UTrace z = run_cell(c, {});
    const auto& fx = fixtures::get(c.fixture);
    // t rounds cover configurations 0..t-1, so t-1 reference steps
    bool ref_ok = run(fx.code, {Nat(c.x)}, c.t - 1, c.s, c.q, c.oracles).has_value();
    REQUIRE(z.accept == ref_ok);
  }
}

TEST_CASE("unsuitable codes reject during preparation") {
  UTrace z = u_run(0, {Nat(3)}, 4, 4, 4);
  CHECK_FALSE(z.suitable);
  CHECK_FALSE(z.accept);
  CHECK(Nat(z.total_time) == z.sched.r0);
  UTrace z2 = u_run(fixtures::get("oracle-probe").code, {Nat(3)}, 4, 4, 4);  // no oracle given
  CHECK_FALSE(z2.suitable);
}

TEST_CASE("round tapes are the simulated configurations") {
  const auto& parity = fixtures::get("parity");
  auto ctx = StepContext::make(parity.code, {Nat(5)}, 4, 1);
  auto tr = run(ctx, 11);
  REQUIRE(tr.has_value());
  UTrace z = u_run(parity.code, {Nat(5)}, 12, 4, 1);
  REQUIRE(z.round_tape.size() == 12);
  for (std::uint64_t u = 0; u < 12; ++u) {
    NatSet expect = config_to_set(ctx, tr->configs[u]);
    REQUIRE(z.round_config_set(u) == expect);
  }
}

TEST_CASE("forward and backward maps invert each other") {
  for (const Cell& c : small_grid()) {
    const auto& fx = fixtures::get(c.fixture);
    auto y = run(fx.code, {Nat(c.x)}, c.t, c.s, c.q, c.oracles);
    if (y) {
      UTrace fz = f_map(*y);
      REQUIRE(fz.accept);
      REQUIRE(validate_utrace(fz, c.oracles).empty());
      Trace back = g_map(fz, c.oracles);
      REQUIRE(back.t == y->t);
      REQUIRE(back.configs == y->configs);
      // round boundary tapes carry exactly the slices
      for (std::uint64_t u = 0; u <= to_u64(y->t); ++u)
        REQUIRE(fz.round_config_set(u) == config_to_set(y->ctx, y->configs[u]));
    }
    UTrace z = run_cell(c, {});
    if (z.accept) {
      Trace mid = g_map(z, c.oracles);
      REQUIRE(check_partial_computation(mid.ctx, mid.to_set(), mid.t).ok);
      UTrace again = f_map(mid);
      REQUIRE(same_semantics(again, z));
    }
  }
}

TEST_CASE("rejecting or malformed records raise with a diagnosis") {
  const Cell starved{"copy", 7, 8, 3, 1, {}};
  UTrace z = run_cell(starved, {});
  REQUIRE_FALSE(z.accept);
  CHECK_THROWS_WITH(g_map(z), Catch::Matchers::ContainsSubstring("rejecting"));

  UTrace good = run_cell({"parity", 5, 8, 4, 1, {}}, {});
  UTrace tampered = good;
  tampered.round_tape[3].set(0, !tampered.round_tape[3].get(0));
  CHECK_THROWS_WITH(g_map(tampered), Catch::Matchers::ContainsSubstring("differs from Start/Next"));
  UTrace late = good;
  late.total_time += 1;
  CHECK_THROWS_WITH(g_map(late), Catch::Matchers::ContainsSubstring("t5"));
}

TEST_CASE("resource law over the grid") {
  for (const Cell& c : small_grid()) {
    UTrace z = run_cell(c, {});
    Nat sn = Nat(c.s) + z.sched.n;
    Nat bound = 1;
    for (unsigned i = 0; i < kUResourceExponent; ++i) bound *= sn;
    REQUIRE(z.sched.t5 <= Nat(c.t) * bound);
    REQUIRE(z.space_used <= bound);
  }
}

TEST_CASE("flag stays up once raised") {
  UTrace z = run_cell({"copy", 7, 8, 3, 1, {}}, {});
  bool seen = false;
  for (bool f : z.flag_after_round) {
    if (seen) REQUIRE(f);
    seen = seen || f;
  }
  REQUIRE(seen);
  REQUIRE_FALSE(z.accept);
}
