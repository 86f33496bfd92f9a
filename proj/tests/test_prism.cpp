#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "prismkit/prism.hpp"

using namespace prismkit;

static Precision prec(long p, int N = 4, int M = 8) { return Precision(p, N, 3, 2, M); }

static void check_witness(const DeltaRing& A, const RingElem& d) {
  auto rep = is_distinguished(A, d);
  REQUIRE(rep.distinguished);
  CHECK(rep.delta_unit);
  REQUIRE(rep.witness.has_value());
  auto [a, b] = *rep.witness;
  CHECK(a * d + b * A.phi(d) == RingElem::constant(d.spec(), A.p()));
}

TEST_CASE("crystalline prism (Z_p, p)") {
  for (long p : {2L, 3L, 5L}) {
    auto P = mk_prism_crystalline(prec(p));
    CHECK(P.d == RingElem::constant(P.A.carrier(), p));
    // delta(p) = 1 - p^{p-1}, a unit
    Int expect = 1 - int_pow(Int(p), static_cast<unsigned long>(p - 1));
    CHECK(P.A.delta(P.d) == RingElem::constant(P.A.carrier(), expect));
    CHECK(P.A.delta(P.d).is_unit());
    check_witness(P.A, P.d);
  }
}

TEST_CASE("(Z_p, p^2) is not distinguished") {
  for (long p : {2L, 3L}) {
    auto C = RingSpec::integers_mod_pn(p, 4);
    auto A = DeltaRing::generator_table(C, p, {});
    auto rep = is_distinguished(A, RingElem::constant(C, p * p));
    CHECK_FALSE(rep.distinguished);
    CHECK_FALSE(rep.delta_unit);
    CHECK_FALSE(rep.witness.has_value());
  }
}

TEST_CASE("Breuil-Kisin prism with E = u^2 - 2") {
  auto P = mk_prism_bk({-2, 0}, prec(2));
  auto C = P.A.carrier();
  auto u = RingElem::var(C, 0);
  CHECK(P.d == u * u - RingElem::constant(C, 2));
  // phi(E) = u^4 - 2 and phi(E) - (u^2 + 2) E = 2, exactly
  auto phiE = P.A.phi(P.d);
  CHECK(phiE == u.pow(4) - RingElem::constant(C, 2));
  CHECK(phiE - (u * u + RingElem::constant(C, 2)) * P.d == RingElem::constant(C, 2));
  check_witness(P.A, P.d);
}

TEST_CASE("non-Eisenstein data is rejected") {
  CHECK_THROWS_WITH_AS(mk_prism_bk({0, 0}, prec(2)), doctest::Contains("unit"), Error);
  try {
    mk_prism_bk({0, 0}, prec(2));  // E = u^2
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotEisenstein);
  }
  try {
    mk_prism_bk({-2, 1}, prec(2));  // odd linear coefficient
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotEisenstein);
  }
}

TEST_CASE("d = u - 2 is distinguished on the series carrier") {
  auto C = RingSpec::parse("Z/2^4[[u]]_8");
  auto A = DeltaRing::generator_table(C, 2, {RingElem::zero(C)});
  auto d = RingElem::var(C, 0) - RingElem::constant(C, 2);
  // delta(u - 2) = 2u - 3 (the constant rule is well-defined mod p^{N-1})
  CHECK(congruent_mod_pk(A.delta(d), RingElem::var(C, 0, 1, 2) + RingElem::constant(C, -3), 3));
  CHECK(A.delta(d).is_unit());
  check_witness(A, d);
}

TEST_CASE("q-de Rham prism") {
  for (long p : {2L, 3L}) {
    auto P = mk_prism_qdr(prec(p));
    auto C = P.A.carrier();
    CHECK(P.d == q_analogue_of_p(C));
    if (p == 2) CHECK(P.d == RingElem::var(C, 0) + RingElem::constant(C, 2));
    if (p == 3)
      CHECK(P.d == RingElem::var(C, 0, 2) + RingElem::var(C, 0, 1, 3) + RingElem::constant(C, 3));
    // phi(q) = q^p with q = 1 + t
    auto q = RingElem::var(C, 0) + RingElem::one(C);
    CHECK(P.A.phi(q) == q.pow(static_cast<unsigned long>(p)));
    check_witness(P.A, P.d);
  }
}

TEST_CASE("perfectoid-style prism") {
  auto P = mk_prism_perfectoid(4, prec(2));
  CHECK(P.A.carrier()->id() == "Z/2^4[t]/(t^4)");
  check_witness(P.A, P.d);
}

TEST_CASE("Hodge-Tate quotients") {
  SUBCASE("crystalline -> F_p") {
    auto q = hodge_tate_quotient(mk_prism_crystalline(prec(3)));
    CHECK(q.ring->same(*RingSpec::prime_field(3)));
    CHECK(q.images.empty());
  }
  SUBCASE("Breuil-Kisin -> Z_p[pi]/(E)") {
    auto q = hodge_tate_quotient(mk_prism_bk({-2, 0}, prec(2)));
    auto expect = RingSpec::eisenstein_quotient(RingSpec::integers_mod_pn(2, 4), "u", {-2, 0});
    CHECK(q.ring->same(*expect));
    // pi^2 = 2 in the quotient
    CHECK(q.images.at(0) * q.images.at(0) == RingElem::constant(q.ring, 2));
  }
  SUBCASE("q-de Rham -> cyclotomic-style quotient") {
    auto q2 = hodge_tate_quotient(mk_prism_qdr(prec(2)));
    // [2]_q = t + 2: the quotient identifies t with -2
    CHECK(q2.images.at(0) == RingElem::constant(q2.ring, -2));
    auto q3 = hodge_tate_quotient(mk_prism_qdr(prec(3)));
    auto z = q3.images.at(0);
    CHECK(z * z + z * Int(3) + RingElem::constant(q3.ring, 3) == RingElem::zero(q3.ring));
  }
  SUBCASE("perfectoid -> Z/p^min(N,K)") {
    CHECK(hodge_tate_quotient(mk_prism_perfectoid(4, prec(2))).ring->same(
        *RingSpec::integers_mod_pn(2, 4)));
    CHECK(hodge_tate_quotient(mk_prism_perfectoid(2, prec(2))).ring->same(
        *RingSpec::integers_mod_pn(2, 2)));
  }
}

TEST_CASE("envelope of x = d collapses to the base") {
  auto check_trivial = [](const PrismSpec& P) {
    auto E = prismatic_envelope(P, {P.d}, 2);
    CHECK(E.confluence_diagnostic);
    for (const auto& rel : E.relations) {
      CHECK(rel.oriented);
      CHECK(rel.residual.is_zero());
    }
    CHECK(E.normal_form(RingElem::var(E.ext, static_cast<size_t>(E.fvar(0, 0)))) ==
          RingElem::one(E.ext));
    CHECK(E.normal_form(RingElem::var(E.ext, static_cast<size_t>(E.fvar(0, 1)))).is_zero());
    CHECK(E.normal_form(RingElem::var(E.ext, static_cast<size_t>(E.fvar(0, 2)))).is_zero());
  };
  check_trivial(mk_prism_crystalline(prec(2)));
  check_trivial(mk_prism_bk({-2, 0}, prec(2)));
}

TEST_CASE("envelope relations at k = 0 are d f_i - x_i verbatim") {
  auto P = mk_prism_bk({-2, 0}, prec(2));
  auto u = RingElem::var(P.A.carrier(), 0);
  auto E = prismatic_envelope(P, {u * u, RingElem::constant(P.A.carrier(), 2)}, 1);
  for (const auto& rel : E.relations) {
    if (rel.k != 0) continue;
    auto pad = [&](const RingElem& a) {
      return eval_at(a, {RingElem::var(E.ext, 0)}, E.ext);
    };
    auto f = RingElem::var(E.ext, static_cast<size_t>(E.fvar(rel.i, 0)));
    CHECK(rel.raw == pad(P.d) * f - pad(E.xs.at(static_cast<size_t>(rel.i))));
  }
}

TEST_CASE("envelope over a free delta-variable numerator") {
  // crystalline base extended by a delta-tower variable t; relation p f = t
  auto C = RingSpec::poly(RingSpec::integers_mod_pn(2, 4), {"t", "dt", "d2t"});
  auto dt = RingElem::var(C, 1), d2t = RingElem::var(C, 2);
  auto A = DeltaRing::generator_table(C, 2, {dt, d2t, RingElem::zero(C)});
  PrismSpec P{PrismCatalog::Crystalline, A, RingElem::constant(C, 2), prec(2)};
  auto E = prismatic_envelope(P, {RingElem::var(C, 0)}, 2);
  CHECK(E.relations.size() == 3);
  CHECK(E.confluence_diagnostic);
  // p f - t has non-unit leading coefficient: kept as an unoriented check
  for (const auto& rel : E.relations) {
    CHECK_FALSE(rel.oriented);
    CHECK_FALSE(rel.residual.is_zero());
  }
  // frozen expansion of delta(2f - t)
  auto f = RingElem::var(E.ext, static_cast<size_t>(E.fvar(0, 0)));
  auto df = RingElem::var(E.ext, static_cast<size_t>(E.fvar(0, 1)));
  auto t = RingElem::var(E.ext, 0), dtx = RingElem::var(E.ext, 1);
  CHECK(E.relations.at(1).raw == df * Int(2) - f * f - dtx - t * t + f * t * Int(2));
}

TEST_CASE("duplicate numerators stay distinct unless forced") {
  SUBCASE("oriented case identifies f1 and f2") {
    auto P = mk_prism_bk({-2, 0}, prec(2));
    auto E = prismatic_envelope(P, {P.d, P.d}, 1);
    auto f1 = RingElem::var(E.ext, static_cast<size_t>(E.fvar(0, 0)));
    auto f2 = RingElem::var(E.ext, static_cast<size_t>(E.fvar(1, 0)));
    CHECK(E.normal_form(f1 - f2).is_zero());
  }
  SUBCASE("non-orientable case reports the non-reduction") {
    auto P = mk_prism_perfectoid(4, prec(2));
    auto t = RingElem::var(P.A.carrier(), 0);
    auto E = prismatic_envelope(P, {t, t}, 1);
    auto f1 = RingElem::var(E.ext, static_cast<size_t>(E.fvar(0, 0)));
    auto f2 = RingElem::var(E.ext, static_cast<size_t>(E.fvar(1, 0)));
    CHECK_FALSE(E.normal_form(f1 - f2).is_zero());
  }
}

TEST_CASE("functor of points: x = d over F_2") {
  auto f2 = RingSpec::prime_field(2);
  auto P = mk_prism_bk({-2, 0}, prec(2));
  auto E = prismatic_envelope(P, {P.d}, 2);
  auto pts = envelope_points(E, f2, 2, {witt_zero(f2, 2, 2)});
  CHECK(pts.equal);
  REQUIRE(pts.set_a.size() == 2);  // h with h_0 = 1: the translate of 1 by V
  for (const auto& h : pts.set_a) CHECK(h.at(0).comps.at(0) == RingElem::one(f2));
}

TEST_CASE("functor of points: nilpotent base point") {
  auto S = RingSpec::parse("Z/2^1[s]/(s^2)");
  auto P = mk_prism_bk({-2, 0}, prec(2));
  auto E = prismatic_envelope(P, {P.d}, 2);
  auto pts = envelope_points(E, S, 2, {teichmuller(RingElem::var(S, 0), 2, 2)});
  CHECK(pts.equal);
  CHECK(!pts.set_a.empty());
}

TEST_CASE("functor of points: degenerate orientations at length 1") {
  auto f2 = RingSpec::prime_field(2);
  auto P = mk_prism_crystalline(prec(2));
  SUBCASE("dbar = 0 and xbar = 0: every point solves the equation") {
    auto E = prismatic_envelope(P, {P.d}, 1);
    auto pts = envelope_points(E, f2, 1, {});
    CHECK(pts.equal);
    CHECK(pts.set_a.size() == 2);  // all of W_1(F_2)
  }
  SUBCASE("dbar = 0 and xbar != 0: empty") {
    auto E = prismatic_envelope(P, {RingElem::one(P.A.carrier())}, 1);
    auto pts = envelope_points(E, f2, 1, {});
    CHECK(pts.equal);
    CHECK(pts.set_a.empty());
  }
  SUBCASE("crystalline x = d at length 2") {
    auto E = prismatic_envelope(P, {P.d}, 2);
    auto pts = envelope_points(E, f2, 2, {});
    CHECK(pts.equal);
    CHECK(pts.set_a.size() == 2);
  }
}

TEST_CASE("functor of points: guard rails") {
  auto f2 = RingSpec::prime_field(2);
  auto P = mk_prism_bk({-2, 0}, prec(2));
  auto E = prismatic_envelope(P, {P.d}, 2);
  // u must land on a topologically nilpotent element: [1]^8 != 0
  CHECK_THROWS_AS(envelope_points(E, f2, 2, {witt_one(f2, 2, 2)}), Error);
  try {
    envelope_points(E, f2, 2, {witt_zero(f2, 2, 2)}, 1);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EnumerationBudgetExceeded);
  }
}
