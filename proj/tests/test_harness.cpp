#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "prismkit/harness.hpp"

using namespace prismkit;

TEST_CASE("witt_invert") {
  auto f3 = RingSpec::prime_field(3);
  for (const auto& u : enumerate_witt(f3, 3, 3)) {
    if (u.comps[0].is_zero()) {
      CHECK_THROWS_AS(witt_invert(u), Error);
      continue;
    }
    CHECK(witt_mul(u, witt_invert(u)) == witt_one(f3, 3, 3));
  }
  auto z8 = RingSpec::integers_mod_pn(2, 3);
  auto u = witt_from_int(z8, 2, 3, 3);
  CHECK(witt_mul(u, witt_invert(u)) == witt_one(z8, 2, 3));
}

TEST_CASE("witt square-zero check") {
  SUBCASE("F_2[x,y]/(x,y)^2") {
    auto R = RingSpec::parse("F_2[x,y]/(x^2,x*y,y^2)");
    auto rep = check_witt_square_zero(R, {RingElem::var(R, 0), RingElem::var(R, 1)}, 3);
    CHECK(rep.pass);
  }
  SUBCASE("Z/4 with J = (2)") {
    auto R = RingSpec::integers_mod_pn(2, 2);
    CHECK(check_witt_square_zero(R, {RingElem::constant(R, 2)}, 3).pass);
  }
  SUBCASE("empty J is vacuously square-zero") {
    CHECK(check_witt_square_zero(RingSpec::prime_field(2), {}, 3).pass);
  }
  SUBCASE("rejects non-square-zero input") {
    auto R = RingSpec::parse("F_2[t]/(t^3)");
    try {
      check_witt_square_zero(R, {RingElem::var(R, 0)}, 2);
      FAIL("expected NotSquareZeroInput");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::NotSquareZeroInput);
    }
  }
}

TEST_CASE("kernel nilpotence check") {
  CHECK(check_kernel_nilpotent(RingSpec::prime_field(3), 2).pass);
  auto rep = check_kernel_nilpotent(RingSpec::parse("F_2[t]/(t^3)"), 1);
  CHECK(rep.pass);
  CHECK(rep.witness.find("sampled") != std::string::npos);
  CHECK_THROWS_AS(check_kernel_nilpotent(RingSpec::integers_mod_pn(2, 2), 1), Error);
}

TEST_CASE("p^2 Hodge-Tate identity check") {
  for (long p : {2L, 3L})
    CHECK(check_p_squared_hodge_tate(witt_one(RingSpec::prime_field(p), p, 3)).pass);
  auto R = RingSpec::parse("F_2[t]/(t^2)");
  auto u = witt_add(teichmuller(RingElem::var(R, 0), 2, 2), witt_one(R, 2, 2));
  CHECK(check_p_squared_hodge_tate(u).pass);
}

TEST_CASE("adjunction roundtrip check") {
  CHECK(check_adjunction_roundtrip(1, 2, 2, RingSpec::prime_field(2), 3, 1, 5).pass);
  CHECK(check_adjunction_roundtrip(1, 2, 2, RingSpec::integers_mod_pn(2, 3), 3, 1, 5).pass);
}

TEST_CASE("registry: all checks pass and reports are deterministic") {
  HarnessConfig cfg;
  cfg.seed = 1;
  auto names = harness_check_names(cfg);
  CHECK(std::is_sorted(names.begin(), names.end()));
  auto reports = run_all(cfg);
  REQUIRE(reports.size() == names.size());
  for (const auto& r : reports) {
    INFO(r.name, ": ", r.witness);
    CHECK(r.pass);
  }
  // byte-identical canonical serialization across runs
  auto reports2 = run_all(cfg);
  for (size_t i = 0; i < reports.size(); ++i)
    CHECK(report_line(reports[i]) == report_line(reports2[i]));
  // runtime is excluded from the canonical form
  auto j = report_to_json(reports[0]);
  CHECK(!j.contains("runtime_ms"));
  CHECK(j.begin().key() == "check");
}

TEST_CASE("registry: run_named selects by name or prefix") {
  auto one = run_named("grouplaw_series");
  REQUIRE(one.size() == 1);
  CHECK(one[0].pass);
  auto fam = run_named("witt_square_zero");
  CHECK(fam.size() == 3);
  CHECK(run_named("no_such_check").empty());
}

TEST_CASE("negative control: corrupted fixture is detected") {
  // In the default run the control is inverted: it passes because the
  // corruption is caught.
  auto ctl = run_named("negative_control/corrupted-frobenius");
  REQUIRE(ctl.size() == 1);
  CHECK(ctl[0].pass);

  // With corrupt_fixture set, the raw failing report is also emitted.
  HarnessConfig cfg;
  cfg.corrupt_fixture = true;
  auto reports = run_all(cfg);
  auto it = std::find_if(reports.begin(), reports.end(),
                         [](const CheckReport& r) { return r.name == "corrupted_fixture"; });
  REQUIRE(it != reports.end());
  CHECK_FALSE(it->pass);
  CHECK(!it->witness.empty());
  bool all_pass = std::all_of(reports.begin(), reports.end(),
                              [](const CheckReport& r) { return r.pass; });
  CHECK_FALSE(all_pass);
}
