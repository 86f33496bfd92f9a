#include "prismkit/harness.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <set>
#include <sstream>

#include "prismkit/rng.hpp"

namespace prismkit {

nlohmann::ordered_json report_to_json(const CheckReport& r) {
  return nlohmann::ordered_json{{"check", r.name},
                                {"instance", r.instance},
                                {"verdict", r.pass ? "pass" : "fail"},
                                {"witness", r.witness}};
}

std::string report_line(const CheckReport& r) { return report_to_json(r).dump(); }

// ---------------------------------------------------------------------------
// Witt-vector inversion
// ---------------------------------------------------------------------------

WittVector witt_invert(const WittVector& u) {
  const SpecPtr& R = u.spec();
  const int n = u.length();
  bool unit0 = false;
  try {
    unit0 = u.comps[0].is_unit();
  } catch (const Error&) {
    unit0 = false;
  }
  if (!unit0) fail(Errc::NotAUnit, "0th component is not a unit: " + u.comps[0].str());
  std::vector<RingElem> vc(static_cast<size_t>(n), RingElem::zero(R));
  vc[0] = u.comps[0].invert();
  WittVector v(u.p, vc);
  const WittVector one = witt_one(R, u.p, n);
  // Newton iteration v <- v(2 - uv); the error 1 - uv squares each round and
  // lives in the V-ideal, so it dies quickly for both char-p and Z/p^N carriers.
  const WittVector two = witt_add(one, one);
  for (int it = 0; it < 64 && witt_mul(u, v) != one; ++it)
    v = witt_mul(v, witt_sub(two, witt_mul(u, v)));
  if (witt_mul(u, v) != one) fail(Errc::NotAUnit, u.str() + " is not invertible");
  return v;
}

// ---------------------------------------------------------------------------
// individual checks
// ---------------------------------------------------------------------------

namespace {

std::string joined(const std::vector<RingElem>& xs) {
  std::string s;
  for (size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i].str();
  return s;
}

WittVector v_pow(WittVector x, int i) {
  for (int k = 0; k < i; ++k) x = verschiebung(x);
  return x;
}

}  // namespace

CheckReport check_witt_square_zero(const SpecPtr& R, const std::vector<RingElem>& j_gens,
                                   int n, size_t budget) {
  CheckReport rep;
  rep.name = "witt_square_zero";
  rep.instance = R->id() + ", J=(" + joined(j_gens) + "), n=" + std::to_string(n);
  const long p = R->p();
  for (const auto& a : j_gens)
    for (const auto& b : j_gens)
      if (!(a * b).is_zero())
        fail(Errc::NotSquareZeroInput, "J is not square-zero: " + (a * b).str());

  // the finite set J = { sum a_i g_i }
  std::vector<RingElem> J = {RingElem::zero(R)};
  if (!j_gens.empty()) {
    auto elems = enumerate_elements(R, budget);
    std::set<std::string> seen;
    std::vector<size_t> idx(j_gens.size(), 0);
    while (true) {
      RingElem s = RingElem::zero(R);
      for (size_t i = 0; i < j_gens.size(); ++i) s = s + elems[idx[i]] * j_gens[i];
      if (seen.insert(s.str()).second) J.push_back(s);
      size_t pos = 0;
      while (pos < idx.size() && ++idx[pos] == elems.size()) idx[pos++] = 0;
      if (pos == idx.size()) break;
    }
  }

  size_t pairs = 0;
  // replay V^i[a] V^j[b] = 0, i + j <= n
  for (const auto& a : J)
    for (const auto& b : J)
      for (int i = 0; i < n; ++i)
        for (int j = 0; i + j <= n && j < n; ++j) {
          auto prod = witt_mul(v_pow(teichmuller(a, p, n), i), v_pow(teichmuller(b, p, n), j));
          ++pairs;
          if (!prod.is_zero()) {
            rep.witness = "V^" + std::to_string(i) + "[" + a.str() + "] V^" + std::to_string(j) +
                          "[" + b.str() + "] = " + prod.str();
            return rep;
          }
        }
  // all Witt vectors with components in J
  std::vector<WittVector> WJ;
  std::vector<size_t> idx(static_cast<size_t>(n), 0);
  while (true) {
    std::vector<RingElem> comps;
    for (int i = 0; i < n; ++i) comps.push_back(J[idx[static_cast<size_t>(i)]]);
    WJ.push_back(WittVector(p, std::move(comps)));
    size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] == J.size()) idx[pos++] = 0;
    if (pos == idx.size()) break;
  }
  if (WJ.size() * WJ.size() > budget)
    fail(Errc::EnumerationBudgetExceeded, "W_n(J) too large to exhaust");
  for (const auto& x : WJ)
    for (const auto& y : WJ) {
      auto prod = witt_mul(x, y);
      ++pairs;
      if (!prod.is_zero()) {
        rep.witness = x.str() + " * " + y.str() + " = " + prod.str();
        return rep;
      }
    }
  rep.pass = true;
  rep.witness = "|J|=" + std::to_string(J.size()) + ", products checked: " + std::to_string(pairs);
  return rep;
}

CheckReport check_kernel_nilpotent(const SpecPtr& R, int n, uint64_t seed, int samples,
                                   size_t budget) {
  CheckReport rep;
  rep.name = "kernel_nilpotent";
  rep.instance = R->id() + ", n=" + std::to_string(n);
  if (!R->is_char_p()) fail(Errc::NotCharP, "carrier must be an F_p-algebra");
  const long p = R->p();
  const int len = n + 2;

  auto verify = [&](const WittVector& a, const WittVector& b) -> std::optional<std::string> {
    auto prod = witt_mul(v_pow(a, n), v_pow(b, n));
    for (int i = 0; i <= n; ++i)
      if (!prod.comps[static_cast<size_t>(i)].is_zero())
        return "V^n(" + a.str() + ") V^n(" + b.str() + ") = " + prod.str();
    return std::nullopt;
  };

  size_t checked = 0;
  bool exhaustive = false;
  if (R->is_finite()) {
    Int card = R->cardinality();
    Int total = 1;
    for (int i = 0; i < 2 * len; ++i) total *= card;
    exhaustive = total <= static_cast<unsigned long>(budget);
  }
  if (exhaustive) {
    auto W = enumerate_witt(R, p, len, budget);
    for (const auto& a : W)
      for (const auto& b : W) {
        ++checked;
        if (auto w = verify(a, b)) {
          rep.witness = *w;
          return rep;
        }
      }
    rep.witness = "exhaustive, pairs: " + std::to_string(checked);
  } else {
    Rng rng(seed);
    for (int it = 0; it < samples; ++it) {
      std::vector<RingElem> ca, cb;
      for (int i = 0; i < len; ++i) {
        ca.push_back(random_elem(R, rng));
        cb.push_back(random_elem(R, rng));
      }
      ++checked;
      if (auto w = verify(WittVector(p, ca), WittVector(p, cb))) {
        rep.witness = *w;
        return rep;
      }
    }
    rep.witness = "sampled, seed " + std::to_string(seed) + ", pairs: " + std::to_string(checked);
  }
  rep.pass = true;
  return rep;
}

CheckReport check_p_squared_hodge_tate(const WittVector& u) {
  CheckReport rep;
  rep.name = "p_squared_hodge_tate";
  rep.instance = "W_" + std::to_string(u.length()) + "(" + u.spec()->id() + "), u=" + u.str();
  const SpecPtr& R = u.spec();
  const long p = u.p;
  const int n = u.length();
  const WittVector uinv = witt_invert(u);
  const WittVector x = verschiebung(uinv);
  // F x = F V(u^{-1}) = p u^{-1}
  if (n >= 2) {
    auto lhs = witt_frobenius(x);
    auto rhs = restriction(witt_mul(witt_from_int(R, p, n, p), uinv));
    if (lhs != rhs) {
      rep.witness = "F V(u^-1) = " + lhs.str() + " != p u^-1 = " + rhs.str();
      return rep;
    }
  }
  auto prod = witt_mul(x, verschiebung(u));
  auto p2 = witt_from_int(R, p, n, Int(p) * p);
  if (prod != p2) {
    rep.witness = "V(u^-1) V(u) = " + prod.str() + " != p^2 = " + p2.str();
    return rep;
  }
  rep.pass = true;
  rep.witness = "p^2 = V(u^-1) V(u) = " + prod.str();
  return rep;
}

CheckReport check_adjunction_roundtrip(int k, int D, long p, const SpecPtr& S, int n,
                                       uint64_t seed, int samples) {
  CheckReport rep;
  rep.name = "adjunction_roundtrip";
  rep.instance = "Z{x_1..x_" + std::to_string(k) + "} depth " + std::to_string(D) + " -> W_" +
                 std::to_string(n) + "(" + S->id() + ")";
  auto A = DeltaRing::free_delta_ring(k, D, Precision(p, 4, n, D, 8));
  const size_t nv = A.carrier()->nvars();

  // constant zero assignment lifts to the zero vector
  {
    std::vector<RingElem> zero(nv, RingElem::zero(S));
    auto L = delta_lift_hom(A, zero, n);
    for (size_t v = 0; v < nv; ++v)
      if (!L.gen_images[v].is_zero()) {
        rep.witness = "lift of 0 is " + L.gen_images[v].str();
        return rep;
      }
  }

  Rng rng(seed);
  for (int it = 0; it < samples; ++it) {
    std::vector<RingElem> f;
    for (size_t v = 0; v < nv; ++v) f.push_back(random_elem(S, rng, 1, 1));
    auto L = delta_lift_hom(A, f, n);
    for (size_t v = 0; v < nv; ++v)
      if (L.gen_images[v].comps[0] != f[v]) {
        rep.witness = "Res(lift(" + f[v].str() + ")) = " + L.gen_images[v].comps[0].str();
        return rep;
      }
    for (int i = 0; i < k; ++i) {
      auto g = A.gen(i, 0);
      auto lhs = restriction(L.apply(A.phi(g)));
      auto rhs = witt_frobenius(L.apply(g));
      if (lhs != rhs) {
        rep.witness = "lift not delta-equivariant at " + g.str() + ": " + lhs.str() +
                      " != " + rhs.str();
        return rep;
      }
    }
  }
  rep.pass = true;
  rep.witness = "samples: " + std::to_string(samples) + ", seed " + std::to_string(seed);
  return rep;
}

// ---------------------------------------------------------------------------
// registry
// ---------------------------------------------------------------------------

namespace {

CheckReport simple_report(const std::string& name, const std::string& instance, bool pass,
                          const std::string& witness) {
  CheckReport r;
  r.name = name;
  r.instance = instance;
  r.pass = pass;
  r.witness = witness;
  return r;
}

// deliberately corrupted fixture: Frobenius with a +1 injected into the top
// component; must be caught by the Teichmuller identity
CheckReport corrupted_frobenius_check() {
  auto zt = RingSpec::poly(RingSpec::integers(), {"t"});
  auto t = RingElem::var(zt, 0);
  auto fx = witt_frobenius(teichmuller(t, 2, 3));
  fx.comps[0] = fx.comps[0] + RingElem::one(zt);  // the corruption
  auto expect = teichmuller(t * t, 2, 2);
  bool pass = (fx == expect);
  return simple_report("corrupted_fixture", "F[t] vs [t^2] in W_2(Z[t]), +1 injected", pass,
                       pass ? "corruption went unnoticed" : "F[t] = " + fx.str() + " != " + expect.str());
}

CheckReport check_distinguished_catalog() {
  const Precision pr2(2, 4, 3, 2, 8);
  std::vector<std::pair<std::string, PrismSpec>> entries;
  entries.emplace_back("crystalline p=3", mk_prism_crystalline(Precision(3, 4, 3, 2, 8)));
  entries.emplace_back("BK E=u^2-2", mk_prism_bk({-2, 0}, pr2));
  entries.emplace_back("q-de Rham p=3", mk_prism_qdr(Precision(3, 4, 3, 2, 8)));
  entries.emplace_back("perfectoid K=4", mk_prism_perfectoid(4, pr2));
  for (const auto& [label, P] : entries) {
    auto rep = is_distinguished(P.A, P.d);
    if (!rep.distinguished || !rep.delta_unit || !rep.witness)
      return simple_report("distinguished_catalog", label, false, "criterion failed for " + P.d.str());
    const auto& [a, b] = *rep.witness;
    if (a * P.d + b * P.A.phi(P.d) != RingElem::constant(P.d.spec(), P.A.p()))
      return simple_report("distinguished_catalog", label, false, "witness identity failed");
  }
  // negative instance: (Z_p, p^2)
  auto C = RingSpec::integers_mod_pn(2, 4);
  auto A = DeltaRing::generator_table(C, 2, {});
  if (is_distinguished(A, RingElem::constant(C, 4)).distinguished)
    return simple_report("distinguished_catalog", "(Z_2, 4)", false, "p^2 reported distinguished");
  return simple_report("distinguished_catalog", "catalog + negative instance", true,
                       "4 catalog entries with witnesses, (Z_p, p^2) rejected");
}

CheckReport check_envelope_points_suite() {
  const std::string name = "envelope_points";
  auto f2 = RingSpec::prime_field(2);
  {
    auto P = mk_prism_bk({-2, 0}, Precision(2, 4, 3, 2, 8));
    auto E = prismatic_envelope(P, {P.d}, 2);
    auto pts = envelope_points(E, f2, 2, {witt_zero(f2, 2, 2)});
    if (!pts.equal || pts.set_a.size() != 2)
      return simple_report(name, "BK x=d over F_2", false,
                           "|A|=" + std::to_string(pts.set_a.size()) +
                               " |B|=" + std::to_string(pts.set_b.size()));
    auto S2 = RingSpec::parse("Z/2^1[s]/(s^2)");
    auto pts2 = envelope_points(E, S2, 2, {teichmuller(RingElem::var(S2, 0), 2, 2)});
    if (!pts2.equal)
      return simple_report(name, "BK x=d over F_2[s]/(s^2)", false, "A != B");
  }
  {
    auto P = mk_prism_crystalline(Precision(2, 4, 3, 2, 8));
    auto all = envelope_points(prismatic_envelope(P, {P.d}, 1), f2, 1, {});
    if (!all.equal || all.set_a.size() != 2)
      return simple_report(name, "crystalline dbar=0, xbar=0", false, "vacuous case wrong");
    auto E1 = prismatic_envelope(P, {RingElem::one(P.A.carrier())}, 1);
    auto none = envelope_points(E1, f2, 1, {});
    if (!none.equal || !none.set_a.empty())
      return simple_report(name, "crystalline dbar=0, xbar!=0", false, "unsatisfiable case wrong");
    auto two = envelope_points(prismatic_envelope(P, {P.d}, 2), f2, 2, {});
    if (!two.equal || two.set_a.size() != 2)
      return simple_report(name, "crystalline x=d at n=2", false, "A != B");
  }
  return simple_report(name, "5 instances (BK, crystalline, degenerate)", true,
                       "A = B on every instance");
}

CheckReport check_frobenius_torsor() {
  const std::string name = "frobenius_torsor";
  for (const auto* id : {"F_2", "F_2[t]/(t^2)"}) {
    auto R = RingSpec::parse(id);
    for (int n : {2, 3}) {
      for (int m = 0; m <= 2; ++m) {
        auto sols = solve_frobenius_equation({R, 2, n, m});
        const auto pm = witt_from_int(R, 2, n, int_pow(Int(2), static_cast<unsigned long>(m)));
        std::set<std::string> have, want;
        for (const auto& s : sols) have.insert(s.str());
        for (const auto& y : enumerate_witt(R, 2, n))
          if (is_ga_sharp(y)) want.insert(witt_add(pm, y).str());
        if (have != want)
          return simple_report(name, std::string(id) + " n=" + std::to_string(n) +
                                         " m=" + std::to_string(m),
                               false, "|solutions|=" + std::to_string(have.size()) +
                                          " |translate|=" + std::to_string(want.size()));
      }
    }
  }
  return simple_report(name, "R in {F_2, F_2[t]/(t^2)}, n in {2,3}, m in {0,1,2}", true,
                       "solution set = p^m + W_n[F] on all 12 instances");
}

CheckReport check_grouplaw_series() {
  const int M = 10;
  auto E = exp_G(M), L = log_G(M);
  bool ok = L.subst_x(E, M) == QPoly::var_x() && E.subst_x(L, M) == QPoly::var_x() &&
            E.subst_x(QPoly::var_x() + QPoly::var_y(), M) ==
                qp_star(E, E.subst_x(QPoly::var_y(), M), M);
  return simple_report("grouplaw_series", "order M=10 over Q[c]", ok,
                       ok ? "log∘exp = id, exp∘log = id, exp additive-to-star"
                          : "series identity failed");
}

CheckReport check_prismatic_log(uint64_t seed) {
  auto S5 = RingSpec::integers_mod_pn(5, 3);
  if (prismatic_log(RingElem::one(S5), 3).value != RingElem::constant(S5, 111))
    return simple_report("prismatic_log", "p=5 N=3 z=1", false,
                         "partial sum != 41/6 mod 125");
  auto S = RingSpec::integers_mod_pn(3, 6);
  Rng rng(seed);
  for (int it = 0; it < 20; ++it) {
    auto z1 = RingElem::constant(S, Int(rng.below(729)));
    auto z2 = RingElem::constant(S, Int(rng.below(729)));
    auto z12 = star_product(z1, z2, RingElem::constant(S, 3));
    if (prismatic_log(z12, 6).value !=
        prismatic_log(z1, 6).value + prismatic_log(z2, 6).value)
      return simple_report("prismatic_log", "additivity mod 3^6", false,
                           "fails at z1=" + z1.str() + ", z2=" + z2.str());
  }
  return simple_report("prismatic_log", "frozen value + 20 product pairs mod 3^6", true,
                       "seed " + std::to_string(seed));
}

using CheckFn = std::function<CheckReport()>;

std::vector<std::pair<std::string, CheckFn>> registry(const HarnessConfig& cfg) {
  std::vector<std::pair<std::string, CheckFn>> reg;
  auto add = [&](const std::string& name, CheckFn fn) { reg.emplace_back(name, std::move(fn)); };

  add("adjunction_roundtrip/F_2", [cfg] {
    return check_adjunction_roundtrip(1, 2, 2, RingSpec::prime_field(2), 3, cfg.seed);
  });
  add("adjunction_roundtrip/Z-2^3", [cfg] {
    return check_adjunction_roundtrip(1, 2, 2, RingSpec::integers_mod_pn(2, 3), 3, cfg.seed);
  });
  add("distinguished_catalog", [] { return check_distinguished_catalog(); });
  add("envelope_points", [] { return check_envelope_points_suite(); });
  add("frobenius_torsor", [] { return check_frobenius_torsor(); });
  add("grouplaw_series", [] { return check_grouplaw_series(); });
  add("kernel_nilpotent/F_2[t]-t^3", [cfg] {
    return check_kernel_nilpotent(RingSpec::parse("F_2[t]/(t^3)"), 1, cfg.seed, 100, cfg.budget);
  });
  add("kernel_nilpotent/F_3", [cfg] {
    return check_kernel_nilpotent(RingSpec::prime_field(3), 2, cfg.seed, 100, cfg.budget);
  });
  add("negative_control/corrupted-frobenius", [] {
    auto inner = corrupted_frobenius_check();
    return simple_report("negative_control/corrupted-frobenius", inner.instance, !inner.pass,
                         inner.pass ? "harness failed to detect the corruption" : inner.witness);
  });
  add("p_squared_hodge_tate/W_3(F_2)", [] {
    return check_p_squared_hodge_tate(witt_one(RingSpec::prime_field(2), 2, 3));
  });
  add("p_squared_hodge_tate/W_3(F_3)", [] {
    return check_p_squared_hodge_tate(witt_one(RingSpec::prime_field(3), 3, 3));
  });
  add("p_squared_hodge_tate/W_2(F_2[t]-t^2)", [] {
    auto R = RingSpec::parse("F_2[t]/(t^2)");
    auto u = witt_add(teichmuller(RingElem::var(R, 0), 2, 2), witt_one(R, 2, 2));
    return check_p_squared_hodge_tate(u);
  });
  add("prismatic_log", [cfg] { return check_prismatic_log(cfg.seed); });
  add("witt_square_zero/F_2[x,y]-(x,y)^2", [cfg] {
    auto R = RingSpec::parse("F_2[x,y]/(x^2,x*y,y^2)");
    return check_witt_square_zero(R, {RingElem::var(R, 0), RingElem::var(R, 1)}, 3, cfg.budget);
  });
  add("witt_square_zero/Z-4", [cfg] {
    auto R = RingSpec::integers_mod_pn(2, 2);
    return check_witt_square_zero(R, {RingElem::constant(R, 2)}, 3, cfg.budget);
  });
  add("witt_square_zero/vacuous", [cfg] {
    return check_witt_square_zero(RingSpec::prime_field(2), {}, 3, cfg.budget);
  });

  if (cfg.corrupt_fixture)
    add("corrupted_fixture", [] { return corrupted_frobenius_check(); });

  std::sort(reg.begin(), reg.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return reg;
}

}  // namespace

std::vector<std::string> harness_check_names(const HarnessConfig& cfg) {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry(cfg)) names.push_back(name);
  return names;
}

std::vector<CheckReport> run_all(const HarnessConfig& cfg) {
  std::vector<CheckReport> out;
  for (const auto& [name, fn] : registry(cfg)) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckReport r = fn();
    r.name = name;
    r.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckReport> run_named(const std::string& name, const HarnessConfig& cfg) {
  std::vector<CheckReport> out;
  for (const auto& [n, fn] : registry(cfg)) {
    if (n != name && n.rfind(name + "/", 0) != 0) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CheckReport r = fn();
    r.name = n;
    r.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace prismkit
