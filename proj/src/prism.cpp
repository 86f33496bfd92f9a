#include "prismkit/prism.hpp"

#include <algorithm>

namespace prismkit {

const char* prism_catalog_name(PrismCatalog c) {
  switch (c) {
    case PrismCatalog::Crystalline: return "crystalline";
    case PrismCatalog::BreuilKisin: return "breuil-kisin";
    case PrismCatalog::QDeRham: return "q-de-rham";
    case PrismCatalog::Perfectoid: return "perfectoid";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// exact integer linear algebra: solve A x = v over Z (column echelon via
// unimodular column operations, then forward substitution)
// ---------------------------------------------------------------------------

namespace {

std::optional<std::vector<Int>> solve_integer_system(std::vector<std::vector<Int>> A,
                                                     const std::vector<Int>& v) {
  const size_t s = A.size();
  const size_t m = s == 0 ? 0 : A[0].size();
  // U tracks the column operations so solutions pull back to the original
  // unknowns.
  std::vector<std::vector<Int>> U(m, std::vector<Int>(m, 0));
  for (size_t j = 0; j < m; ++j) U[j][j] = 1;

  auto col_swap = [&](size_t a, size_t b) {
    if (a == b) return;
    for (size_t r = 0; r < s; ++r) std::swap(A[r][a], A[r][b]);
    for (size_t r = 0; r < m; ++r) std::swap(U[r][a], U[r][b]);
  };
  auto col_axpy = [&](size_t dst, size_t src, const Int& q) {  // col_dst -= q * col_src
    if (q == 0) return;
    for (size_t r = 0; r < s; ++r) A[r][dst] -= q * A[r][src];
    for (size_t r = 0; r < m; ++r) U[r][dst] -= q * U[r][src];
  };
  auto col_negate = [&](size_t j) {
    for (size_t r = 0; r < s; ++r) A[r][j] = -A[r][j];
    for (size_t r = 0; r < m; ++r) U[r][j] = -U[r][j];
  };

  std::vector<int> pivot_of_row(s, -1);
  size_t pc = 0;
  for (size_t r = 0; r < s && pc < m; ++r) {
    while (true) {
      // smallest nonzero entry of row r among columns pc..m-1
      int best = -1;
      for (size_t j = pc; j < m; ++j) {
        if (A[r][j] == 0) continue;
        if (best < 0 || cmp(abs(A[r][j]), abs(A[r][static_cast<size_t>(best)])) < 0)
          best = static_cast<int>(j);
      }
      if (best < 0) break;  // no pivot in this row
      col_swap(pc, static_cast<size_t>(best));
      bool clean = true;
      for (size_t j = pc + 1; j < m; ++j) {
        if (A[r][j] == 0) continue;
        Int q = A[r][j] / A[r][pc];  // truncated quotient: Euclidean descent
        col_axpy(j, pc, q);
        if (A[r][j] != 0) clean = false;
      }
      if (clean) break;
    }
    if (A[r][pc] != 0) {
      if (A[r][pc] < 0) col_negate(pc);
      pivot_of_row[r] = static_cast<int>(pc);
      ++pc;
    }
  }

  std::vector<Int> y(m, 0);
  for (size_t r = 0; r < s; ++r) {
    Int residual = v[r];
    for (size_t j = 0; j < m; ++j)
      if (y[j] != 0) residual -= A[r][j] * y[j];
    if (pivot_of_row[r] < 0) {
      if (residual != 0) return std::nullopt;
      continue;
    }
    const size_t pj = static_cast<size_t>(pivot_of_row[r]);
    if (residual % A[r][pj] != 0) return std::nullopt;
    y[pj] = residual / A[r][pj];
  }
  std::vector<Int> x(m, 0);
  for (size_t r = 0; r < m; ++r)
    for (size_t j = 0; j < m; ++j)
      if (y[j] != 0) x[r] += U[r][j] * y[j];
  return x;
}

// q^{-1} when q is invertible: constant fast path (works on any carrier),
// geometric-series inversion on local carriers.
std::optional<RingElem> try_invert(const RingElem& q) {
  if (q.is_zero()) return std::nullopt;
  const SpecPtr& C = q.spec();
  if (q.is_constant()) {
    Int c = q.constant_coeff();
    if (C->z_based()) {
      if (c == 1 || c == -1) return RingElem::constant(C, c);
      return std::nullopt;
    }
    Int inv;
    if (mpz_invert(inv.get_mpz_t(), c.get_mpz_t(), C->modulus().get_mpz_t()) == 0)
      return std::nullopt;
    return RingElem::constant(C, inv);
  }
  if (!C->is_local()) return std::nullopt;
  if (!q.is_unit()) return std::nullopt;
  return q.invert();
}

}  // namespace

// ---------------------------------------------------------------------------
// distinguishedness
// ---------------------------------------------------------------------------

DistinguishedReport is_distinguished(const DeltaRing& A, const RingElem& d) {
  const SpecPtr& C = A.carrier();
  if (!d.spec() || !d.spec()->same(*C))
    fail(Errc::SpecMismatch, "orientation element outside the delta carrier");
  if (C->z_based() || !C->is_local())
    fail(Errc::UnsupportedCarrier,
         "distinguishedness is decided on local modular catalog carriers");
  const long p = C->p();
  const int N = C->padic_digits();

  DistinguishedReport rep;
  const RingElem phid = A.phi(d);
  rep.delta_unit = A.delta(d).is_unit();

  if (d.is_unit()) {
    // a unit orientation generates the unit ideal, which is never a prism;
    // report non-distinguished without asserting criterion agreement
    rep.distinguished = false;
    return rep;
  }

  const auto basis = C->monomial_basis();
  const size_t s = basis.size();
  std::map<Monomial, size_t> idx;
  for (size_t j = 0; j < s; ++j) idx.emplace(basis[j], j);
  auto coords = [&](const RingElem& e) {
    std::vector<Int> col(s, 0);
    for (const auto& [m, c] : e.terms()) col[idx.at(m)] = c;
    return col;
  };

  // unknowns: coefficients of a over the basis, then of b, then the p^N
  // multiples that make the system a congruence mod p^N
  std::vector<std::vector<Int>> M(s, std::vector<Int>(3 * s, 0));
  for (size_t j = 0; j < s; ++j) {
    RingElem bj = RingElem::make(C, {{basis[j], Int(1)}});
    auto cd = coords(bj * d);
    auto cf = coords(bj * phid);
    for (size_t r = 0; r < s; ++r) {
      M[r][j] = cd[r];
      M[r][s + j] = cf[r];
    }
    M[j][2 * s + j] = pow_pk(p, N);
  }
  const auto target = coords(RingElem::constant(C, p));

  auto sol = solve_integer_system(M, target);
  rep.distinguished = sol.has_value();
  if (sol) {
    std::map<Monomial, Int> ta, tb;
    for (size_t j = 0; j < s; ++j) {
      if ((*sol)[j] != 0) ta[basis[j]] = (*sol)[j];
      if ((*sol)[s + j] != 0) tb[basis[j]] = (*sol)[s + j];
    }
    RingElem a = RingElem::make(C, std::move(ta));
    RingElem b = RingElem::make(C, std::move(tb));
    if (a * d + b * phid != RingElem::constant(C, p))
      fail(Errc::RelationViolated, "membership witness fails to reproduce p");
    rep.witness = std::make_pair(a, b);
  }

  if (C->nvars() == 0) {
    // scalar cross-check: (d, phi(d)) = (p^min(v(d), v(phi(d))))
    auto val = [&](const RingElem& e) {
      if (e.is_zero()) return N + 1;
      return p_valuation(e.constant_coeff(), p);
    };
    const bool by_valuation = std::min(val(d), val(phid)) <= 1;
    if (by_valuation != rep.distinguished)
      fail(Errc::RelationViolated, "valuation and linear-algebra verdicts disagree");
  }

  if (rep.distinguished != rep.delta_unit)
    fail(Errc::RelationViolated,
         "ideal-membership and delta(d)-unit criteria disagree on " + d.str());
  return rep;
}

// ---------------------------------------------------------------------------
// catalog constructors
// ---------------------------------------------------------------------------

namespace {

PrismSpec finish_prism(PrismCatalog cat, DeltaRing A, RingElem d, const Precision& prec) {
  auto rep = is_distinguished(A, d);
  if (!rep.distinguished)
    fail(Errc::NotDistinguished, "orientation " + d.str() + " is not distinguished");
  return PrismSpec{cat, std::move(A), std::move(d), prec};
}

}  // namespace

PrismSpec mk_prism_crystalline(const Precision& prec) {
  prec.validate();
  auto C = RingSpec::integers_mod_pn(prec.p, prec.padic_digits);
  auto A = DeltaRing::generator_table(C, prec.p, {});
  return finish_prism(PrismCatalog::Crystalline, std::move(A),
                      RingElem::constant(C, prec.p), prec);
}

PrismSpec mk_prism_bk(const std::vector<Int>& eis, const Precision& prec) {
  prec.validate();
  const long p = prec.p;
  if (eis.empty()) fail(Errc::NotEisenstein, "E must have degree >= 1");
  for (size_t i = 0; i < eis.size(); ++i)
    if (eis[i] % p != 0)
      fail(Errc::NotEisenstein,
           "coefficient of degree " + std::to_string(i) + " not divisible by p");
  if (eis[0] == 0 || p_valuation(eis[0], p) != 1)
    fail(Errc::NotEisenstein, "constant term is not p times a unit");
  const int e = static_cast<int>(eis.size());
  if (e >= prec.series_order)
    fail(Errc::BadPrecision, "series order must exceed deg E");
  auto C = RingSpec::power_series_trunc(
      RingSpec::integers_mod_pn(p, prec.padic_digits), {"u"}, prec.series_order);
  auto A = DeltaRing::generator_table(C, p, {RingElem::zero(C)});
  RingElem d = RingElem::var(C, 0, static_cast<unsigned>(e));
  for (int i = 0; i < e; ++i)
    d = d + (i == 0 ? RingElem::constant(C, eis[0])
                    : RingElem::var(C, 0, static_cast<unsigned>(i), eis[static_cast<size_t>(i)]));
  return finish_prism(PrismCatalog::BreuilKisin, std::move(A), std::move(d), prec);
}

RingElem q_analogue_of_p(const SpecPtr& carrier) {
  const long p = carrier->p();
  RingElem d = RingElem::zero(carrier);
  for (long m = 0; m < p; ++m) {
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(m + 1));
    d = d + (m == 0 ? RingElem::constant(carrier, b)
                    : RingElem::var(carrier, 0, static_cast<unsigned>(m), b));
  }
  return d;
}

PrismSpec mk_prism_qdr(const Precision& prec) {
  prec.validate();
  const long p = prec.p;
  if (p - 1 >= prec.series_order)
    fail(Errc::BadPrecision, "series order must exceed deg [p]_q = p-1");
  auto C = RingSpec::power_series_trunc(
      RingSpec::integers_mod_pn(p, prec.padic_digits), {"t"}, prec.series_order);
  // delta(t) from phi(q) = q^p with q = 1 + t: (phi(t) - t^p)/p
  auto K = delta_sum_correction(p);
  RingElem dt = RingElem::zero(C);
  for (long j = 1; j < p; ++j)
    dt = dt + RingElem::var(C, 0, static_cast<unsigned>(j), K[static_cast<size_t>(j - 1)]);
  auto A = DeltaRing::generator_table(C, p, {dt});
  return finish_prism(PrismCatalog::QDeRham, std::move(A), q_analogue_of_p(C), prec);
}

PrismSpec mk_prism_perfectoid(int K, const Precision& prec) {
  prec.validate();
  if (K < 1) fail(Errc::BadPrecision, "nilpotency order must be >= 1");
  Monomial tk(1);
  tk.e[0] = static_cast<unsigned>(K);
  auto C = RingSpec::poly_quotient(RingSpec::integers_mod_pn(prec.p, prec.padic_digits),
                                   {"t"}, {tk});
  auto A = DeltaRing::generator_table(C, prec.p, {RingElem::zero(C)});
  RingElem d = RingElem::constant(C, prec.p) + RingElem::var(C, 0);
  return finish_prism(PrismCatalog::Perfectoid, std::move(A), std::move(d), prec);
}

// ---------------------------------------------------------------------------
// Hodge-Tate quotient
// ---------------------------------------------------------------------------

HodgeTateQuotient hodge_tate_quotient(const PrismSpec& P) {
  const SpecPtr& C = P.A.carrier();
  const long p = P.prec.p;
  const int N = C->padic_digits();
  switch (P.catalog) {
    case PrismCatalog::Crystalline:
      return {RingSpec::prime_field(p), {}};
    case PrismCatalog::BreuilKisin:
    case PrismCatalog::QDeRham: {
      // d is monic Eisenstein in the series variable; A/(d) is the Eisenstein
      // quotient, exact when the truncation ideal dies there (u^M with
      // v(u) = 1/e, so M >= e*N suffices)
      const unsigned e = P.d.degree();
      std::vector<Int> coeffs(e, 0);
      for (const auto& [m, c] : P.d.terms()) {
        if (m.e[0] == e) {
          if (c != 1) fail(Errc::NotEisenstein, "orientation is not monic");
        } else {
          coeffs[m.e[0]] = c;
        }
      }
      if (C->series_order() < static_cast<int>(e) * N)
        fail(Errc::BadPrecision, "series order too small for an exact quotient");
      auto q = RingSpec::eisenstein_quotient(RingSpec::integers_mod_pn(p, N),
                                             C->vars()[0], std::move(coeffs),
                                             Errc::NotEisenstein);
      return {q, {RingElem::var(q, 0)}};
    }
    case PrismCatalog::Perfectoid: {
      // t = -p in the quotient; t^K = 0 caps the precision at min(N, K)
      unsigned K = C->monomial_ideal().at(0).e[0];
      int digits = std::min(N, static_cast<int>(K));
      auto q = RingSpec::integers_mod_pn(p, digits);
      return {q, {RingElem::constant(q, -p)}};
    }
  }
  fail(Errc::UnsupportedQuery, "unknown catalog entry");
}

// ---------------------------------------------------------------------------
// prismatic envelopes
// ---------------------------------------------------------------------------

namespace {

std::string env_gen_name(int i, int j) {
  std::string base = "f" + std::to_string(i + 1);
  if (j == 0) return base;
  if (j == 1) return "d" + base;
  return "d" + std::to_string(j) + base;
}

RingElem pad_into(const RingElem& a, const SpecPtr& ext) {
  std::map<Monomial, Int> t;
  for (const auto& [m, c] : a.terms()) {
    Monomial mm(ext->nvars());
    std::copy(m.e.begin(), m.e.end(), mm.e.begin());
    t.emplace(std::move(mm), c);
  }
  return RingElem::make(ext, std::move(t));
}

// drop appended variables; valid only when none occur
RingElem project_to_base(const RingElem& a, const SpecPtr& base) {
  std::map<Monomial, Int> t;
  for (const auto& [m, c] : a.terms()) {
    Monomial mm(base->nvars());
    std::copy(m.e.begin(), m.e.begin() + static_cast<long>(base->nvars()), mm.e.begin());
    t.emplace(std::move(mm), c);
  }
  return RingElem::make(base, std::move(t));
}

bool uses_var_beyond(const RingElem& a, size_t first_ext) {
  for (const auto& [m, c] : a.terms())
    for (size_t v = first_ext; v < m.e.size(); ++v)
      if (m.e[v] != 0) return true;
  return false;
}

constexpr int kInfDigits = 1 << 20;

RingElem reinterpret_terms(const RingElem& a, const SpecPtr& to) {
  std::map<Monomial, Int> t = a.terms();
  return RingElem::make(to, std::move(t));
}

// Working state of one relation during orientation. On modular carriers every
// delta application and every p-cancellation costs one p-adic digit, so the
// pipeline runs in a guard-digit lift of the extended carrier and `digits`
// tracks how many digits of the value are actually meaningful.
struct Tracked {
  RingElem value;  // over a p-adically downgraded copy of the lifted carrier
  int digits = kInfDigits;
};

struct EnvelopeWork {
  SpecPtr ext_lift;  // extended carrier with guard digits (== ext when Z-based)
  long p = 2;
  int lift_digits = kInfDigits;
  bool modular = false;

  SpecPtr spec_at(int digits) const {
    if (!modular || digits >= lift_digits) return ext_lift;
    return ext_lift->p_adic_downgrade(lift_digits - digits);
  }
  Tracked at(const RingElem& a, int digits) const {
    return {reinterpret_terms(a, spec_at(digits)), digits};
  }
  // normalize onto the spec for min(digits, current), even if only the spec
  // object differs
  void lower(Tracked& t, int digits) const { t = at(t.value, std::min(digits, t.digits)); }
};

struct Rule {
  int var = -1;
  Tracked rhs;
};

// substitute every oriented variable until none remains, merging precision
Tracked normal_form_tracked(const EnvelopeWork& W, Tracked cur, const std::vector<Rule>& rules) {
  for (int round = 0; round < 200; ++round) {
    const Rule* active = nullptr;
    for (const auto& r : rules) {
      for (const auto& [m, c] : cur.value.terms())
        if (m.e[static_cast<size_t>(r.var)] != 0) {
          active = &r;
          break;
        }
      if (active) break;
    }
    if (!active) return cur;
    W.lower(cur, active->rhs.digits);
    const SpecPtr& S = cur.value.spec();
    std::vector<RingElem> images;
    for (size_t v = 0; v < S->nvars(); ++v)
      images.push_back(static_cast<int>(v) == active->var
                           ? reinterpret_terms(active->rhs.value, S)
                           : RingElem::var(S, v));
    cur.value = eval_at(cur.value, images, S);
  }
  fail(Errc::CapExceeded, "rewrite did not reach a normal form");
}

// exact removal of common content: d and its phi-twists via carrier long
// division (lossless, unit lead), scalar p-content via canonical-representative
// division (costs one tracked digit per step)
void cancel_content(const EnvelopeWork& W, Tracked& red, const std::vector<Tracked>& divisors,
                    int min_digits, int* cancelled_p) {
  bool progress = true;
  while (progress && !red.value.is_zero()) {
    progress = false;
    for (const auto& dv : divisors) {
      if (dv.value.is_zero() || dv.value.is_constant()) continue;
      const int g = std::min(red.digits, dv.digits);
      Tracked r2 = red, d2 = dv;
      W.lower(r2, g);
      W.lower(d2, g);
      if (auto q = div_exact(r2.value, d2.value)) {
        red = {*q, g};
        progress = true;
      }
    }
    if (red.value.is_zero()) break;
    bool all_div = true;
    for (const auto& [m, c] : red.value.terms())
      if (c % W.p != 0) {
        all_div = false;
        break;
      }
    const int after = W.modular ? red.digits - 1 : red.digits;
    if (all_div && after >= min_digits) {
      std::map<Monomial, Int> t;
      for (const auto& [m, c] : red.value.terms()) t.emplace(m, c / W.p);
      red = W.at(RingElem::make(red.value.spec(), std::move(t)), after);
      ++*cancelled_p;
      progress = true;
    }
  }
}

}  // namespace

int EnvelopePresentation::fvar(int i, int j) const {
  return static_cast<int>(base.A.carrier()->nvars()) + i * (depth + 1) + j;
}

RingElem EnvelopePresentation::normal_form(const RingElem& a) const {
  RingElem cur = a;
  for (int round = 0; round < 200; ++round) {
    int active = -1;
    for (const auto& rel : relations) {
      if (!rel.oriented) continue;
      for (const auto& [m, c] : cur.terms())
        if (m.e[static_cast<size_t>(rel.rule_var)] != 0) {
          active = rel.rule_var;
          break;
        }
      if (active >= 0) break;
    }
    if (active < 0) return cur;
    std::vector<RingElem> images;
    for (size_t v = 0; v < ext->nvars(); ++v)
      images.push_back(static_cast<int>(v) == active
                           ? std::find_if(relations.begin(), relations.end(),
                                          [&](const EnvelopeRelation& r) {
                                            return r.oriented && r.rule_var == active;
                                          })
                                 ->rule_rhs
                           : RingElem::var(ext, v));
    cur = eval_at(cur, images, ext);
  }
  fail(Errc::CapExceeded, "rewrite did not reach a normal form");
}

EnvelopePresentation prismatic_envelope(const PrismSpec& P, const std::vector<RingElem>& xs,
                                        int D) {
  const SpecPtr& C = P.A.carrier();
  if (xs.empty()) fail(Errc::UnsupportedQuery, "need at least one numerator");
  for (const auto& x : xs)
    if (!x.spec() || !x.spec()->same(*C))
      fail(Errc::SpecMismatch, "numerator outside the prism carrier");
  if (D < 0) fail(Errc::BadPrecision, "delta-depth must be >= 0");
  const int r = static_cast<int>(xs.size());
  const long p = P.A.p();
  const size_t nb = C->nvars();

  std::vector<std::string> extra;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j <= D; ++j) extra.push_back(env_gen_name(i, j));
  SpecPtr ext = C->with_vars_appended(extra);

  // Guard digits: each delta application and each p-cancellation on a Z/p^N
  // carrier is only meaningful one digit down, so the expansion runs with 2D
  // spare digits and the results are reduced back to N at the end.
  const bool modular = !C->z_based();
  const int N = modular ? C->padic_digits() : 0;
  const int guard = modular ? 2 * D : 0;
  EnvelopeWork W{modular ? ext->p_adic_lift(guard) : ext, p,
                 modular ? N + guard : kInfDigits, modular};

  auto make_table = [&](const SpecPtr& carrier) {
    std::vector<std::optional<RingElem>> table;
    for (size_t v = 0; v < nb; ++v) {
      if (!P.A.delta_of(v))
        fail(Errc::DepthExceeded,
             "base delta-table must be closed to expand envelope relations");
      table.emplace_back(reinterpret_terms(pad_into(*P.A.delta_of(v), ext), carrier));
    }
    for (int i = 0; i < r; ++i)
      for (int j = 0; j <= D; ++j) {
        if (j < D)
          table.emplace_back(
              RingElem::var(carrier, nb + static_cast<size_t>(i * (D + 1) + j + 1)));
        else
          table.emplace_back(std::nullopt);
      }
    return table;
  };
  DeltaRing ext_delta = DeltaRing::generator_table(ext, p, make_table(ext));
  DeltaRing lift_delta = DeltaRing::generator_table(W.ext_lift, p, make_table(W.ext_lift));

  EnvelopePresentation E{P, xs, D, ext, ext_delta, {}, false};

  const RingElem d_lift = reinterpret_terms(pad_into(P.d, ext), W.ext_lift);
  std::vector<Tracked> divisors = {{d_lift, W.lift_digits}};
  RingElem phi_run = d_lift;
  for (int j = 1; j <= D; ++j) {
    phi_run = lift_delta.phi(phi_run);
    divisors.push_back({phi_run, W.lift_digits - j});
  }

  // relations in delta-order-major order so rules from lower k reduce higher k
  std::vector<std::vector<RingElem>> raw(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) {
    RingElem R =
        d_lift * RingElem::var(W.ext_lift, nb + static_cast<size_t>(i * (D + 1))) -
        reinterpret_terms(pad_into(xs[static_cast<size_t>(i)], ext), W.ext_lift);
    raw[static_cast<size_t>(i)].push_back(R);
    for (int k = 1; k <= D; ++k) {
      R = lift_delta.delta(R);
      raw[static_cast<size_t>(i)].push_back(R);
    }
  }

  std::vector<Rule> rules;
  auto reduce_back = [&](const Tracked& t) {
    if (t.digits < N)
      fail(Errc::PrecisionExhausted, "envelope reduction used up the guard digits");
    return reinterpret_terms(t.value, ext);
  };

  std::vector<Tracked> residuals;
  for (int k = 0; k <= D; ++k) {
    for (int i = 0; i < r; ++i) {
      EnvelopeRelation rel;
      rel.k = k;
      rel.i = i;
      const RingElem& raw_k = raw[static_cast<size_t>(i)][static_cast<size_t>(k)];
      rel.raw = reduce_back({reinterpret_terms(raw_k, W.ext_lift), W.lift_digits - k});
      Tracked red = normal_form_tracked(W, W.at(raw_k, W.lift_digits - k), rules);
      cancel_content(W, red, divisors, N, &rel.cancelled_p_digits);
      if (!red.value.is_zero()) {
        // candidate elimination targets: appended variables, highest
        // delta-order first, intended (k, i) before the rest
        std::vector<int> cands = {E.fvar(i, k)};
        for (int j = D; j >= 0; --j)
          for (int ii = r - 1; ii >= 0; --ii)
            if (!(ii == i && j == k)) cands.push_back(E.fvar(ii, j));
        const SpecPtr& RS = red.value.spec();
        for (int v : cands) {
          std::map<Monomial, Int> qt, rt;
          bool linear = true;
          for (const auto& [m, c] : red.value.terms()) {
            const unsigned ev = m.e[static_cast<size_t>(v)];
            if (ev == 0) {
              rt.emplace(m, c);
            } else if (ev == 1) {
              Monomial mm = m;
              mm.e[static_cast<size_t>(v)] = 0;
              qt.emplace(std::move(mm), c);
            } else {
              linear = false;
              break;
            }
          }
          if (!linear || qt.empty()) continue;
          RingElem q = RingElem::make(RS, std::move(qt));
          if (uses_var_beyond(q, nb)) continue;  // leading coefficient must be base
          SpecPtr base_at =
              modular ? C->p_adic_lift(guard)->p_adic_downgrade(W.lift_digits - red.digits)
                      : C;
          auto qinv = try_invert(project_to_base(q, base_at));
          if (!qinv) continue;
          rel.oriented = true;
          rel.rule_var = v;
          Tracked rhs = normal_form_tracked(
              W, {-(RingElem::make(RS, std::move(rt))) * pad_into(*qinv, RS), red.digits},
              rules);
          rules.push_back({v, rhs});
          rel.rule_rhs = reduce_back(rhs);
          red = {RingElem::zero(RS), red.digits};
          break;
        }
      }
      rel.residual = reduce_back(red);
      residuals.push_back(red);
      E.relations.push_back(std::move(rel));
    }
  }

  // diagnostic: every oriented relation re-reduces to zero and every rule
  // right-hand side is stable under one more rewrite pass
  bool diag = true;
  for (size_t ri = 0; ri < E.relations.size(); ++ri) {
    auto& rel = E.relations[ri];
    int dummy = 0;
    Tracked again = normal_form_tracked(
        W, W.at(raw[static_cast<size_t>(rel.i)][static_cast<size_t>(rel.k)],
                W.lift_digits - rel.k),
        rules);
    cancel_content(W, again, divisors, N, &dummy);
    if (rel.oriented) {
      if (!again.value.is_zero()) diag = false;
      if (E.normal_form(rel.rule_rhs) != rel.rule_rhs) diag = false;
    } else {
      rel.residual = reduce_back(again);
    }
  }
  E.confluence_diagnostic = diag;
  return E;
}

// ---------------------------------------------------------------------------
// functor of points
// ---------------------------------------------------------------------------

namespace {

WittVector witt_eval_unchecked(const RingElem& a, const std::vector<WittVector>& images,
                               const SpecPtr& target, long p, int n) {
  std::vector<std::map<unsigned, WittVector>> cache(images.size());
  WittVector acc = witt_zero(target, p, n);
  for (const auto& [m, c] : a.terms()) {
    WittVector term = witt_from_int(target, p, n, c);
    for (size_t i = 0; i < images.size(); ++i) {
      if (m.e[i] == 0) continue;
      auto it = cache[i].find(m.e[i]);
      if (it == cache[i].end()) it = cache[i].emplace(m.e[i], witt_pow(images[i], m.e[i])).first;
      term = witt_mul(term, it->second);
    }
    acc = witt_add(acc, term);
  }
  return acc;
}

WittVector monomial_image(const Monomial& m, const std::vector<WittVector>& images,
                          const SpecPtr& target, long p, int n) {
  WittVector out = witt_one(target, p, n);
  for (size_t i = 0; i < images.size(); ++i)
    if (m.e[i] != 0) out = witt_mul(out, witt_pow(images[i], m.e[i]));
  return out;
}

WittVector restrict_to(WittVector w, int len) {
  while (w.length() > len) w = restriction(w);
  return w;
}

}  // namespace

WittVector witt_hom_apply(const RingElem& a, const std::vector<WittVector>& images,
                          const SpecPtr& target, long p, int n) {
  const SpecPtr& C = a.spec();
  if (images.size() != C->nvars()) fail(Errc::SpecMismatch, "image arity mismatch");
  for (const auto& im : images) {
    if (im.p != p || im.length() != n || !im.spec()->same(*target))
      fail(Errc::SpecMismatch, "image outside W_n(target)");
  }
  if (!C->z_based() && !witt_from_int(target, p, n, C->modulus()).is_zero())
    fail(Errc::RelationViolated, "source modulus does not vanish in W_n(target)");
  for (const auto& g : C->monomial_ideal())
    if (!monomial_image(g, images, target, p, n).is_zero())
      fail(Errc::RelationViolated, "monomial relation does not vanish in W_n(target)");
  if (C->has_eisenstein()) {
    const auto& cs = C->eisenstein();
    Monomial lead(C->nvars());
    lead.e[0] = static_cast<unsigned>(cs.size());
    WittVector acc = monomial_image(lead, images, target, p, n);
    for (size_t i = 0; i < cs.size(); ++i) {
      Monomial m(C->nvars());
      m.e[0] = static_cast<unsigned>(i);
      acc = witt_add(acc, witt_mul(witt_from_int(target, p, n, cs[i]),
                                   monomial_image(m, images, target, p, n)));
    }
    if (!acc.is_zero())
      fail(Errc::RelationViolated, "Eisenstein relation does not vanish in W_n(target)");
  }
  return witt_eval_unchecked(a, images, target, p, n);
}

EnvelopePoints envelope_points(const EnvelopePresentation& E, const SpecPtr& S, int n,
                               const std::vector<WittVector>& base_images, size_t budget) {
  const long p = E.base.A.p();
  const SpecPtr& C = E.base.A.carrier();
  const size_t r = E.xs.size();
  if (n < 1) fail(Errc::BadPrecision, "Witt length must be >= 1");

  const WittVector dbar = witt_hom_apply(E.base.d, base_images, S, p, n);
  std::vector<WittVector> xbar;
  for (const auto& x : E.xs) xbar.push_back(witt_hom_apply(x, base_images, S, p, n));

  auto W = enumerate_witt(S, p, n, budget);
  Int tuples = 1;
  for (size_t i = 0; i < r; ++i) tuples *= static_cast<unsigned long>(W.size());
  if (tuples > static_cast<unsigned long>(budget))
    fail(Errc::EnumerationBudgetExceeded,
         "candidate tuple count " + tuples.get_str() + " exceeds budget");

  EnvelopePoints out;
  std::vector<size_t> idx(r, 0);
  const size_t nb = C->nvars();
  while (true) {
    std::vector<WittVector> h;
    for (size_t i = 0; i < r; ++i) h.push_back(W[idx[i]]);

    bool in_a = true;
    for (size_t i = 0; i < r && in_a; ++i)
      if (witt_mul(h[i], dbar) != xbar[i]) in_a = false;
    if (in_a) out.set_a.push_back(h);

    // delta towers delta_W^j(h_i), truncating naturally in length
    std::vector<std::vector<WittVector>> dh(r);
    for (size_t i = 0; i < r; ++i) {
      dh[i].push_back(h[i]);
      for (int j = 1; j <= E.depth && dh[i].back().length() >= 2; ++j)
        dh[i].push_back(delta_on_witt(dh[i].back()));
    }
    bool in_b = true;
    for (const auto& rel : E.relations) {
      const int len = n - rel.k;
      if (len < 1) continue;  // beyond working length, unverifiable
      std::vector<WittVector> images;
      for (size_t v = 0; v < E.ext->nvars(); ++v) {
        if (v < nb) {
          images.push_back(restrict_to(base_images[v], len));
        } else {
          const size_t off = v - nb;
          const size_t i = off / static_cast<size_t>(E.depth + 1);
          const size_t j = off % static_cast<size_t>(E.depth + 1);
          images.push_back(j < dh[i].size() ? restrict_to(dh[i][j], len)
                                            : witt_zero(S, p, len));
        }
      }
      if (!witt_eval_unchecked(rel.raw, images, S, p, len).is_zero()) {
        in_b = false;
        break;
      }
    }
    if (in_b) out.set_b.push_back(h);

    size_t pos = 0;
    while (pos < r && ++idx[pos] == W.size()) {
      idx[pos] = 0;
      ++pos;
    }
    if (pos == r) break;
  }
  out.equal = (out.set_a == out.set_b);
  return out;
}

}  // namespace prismkit
