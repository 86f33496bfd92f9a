#include "prismkit/hodge_tate.hpp"

#include <sstream>

namespace prismkit {

// ---------------------------------------------------------------------------
// Frobenius-equation torsor
// ---------------------------------------------------------------------------

std::vector<WittVector> solve_frobenius_equation(const SenSolveInstance& inst) {
  if (!inst.R->is_char_p() || inst.R->p() != inst.p)
    fail(Errc::NotCharP, "carrier must be an F_p-algebra for the configured p");
  if (inst.n < 2) fail(Errc::BadPrecision, "F needs Witt length >= 2");
  if (inst.m < 0) fail(Errc::BadPrecision, "target exponent must be >= 0");
  const WittVector target =
      witt_from_int(inst.R, inst.p, inst.n - 1, int_pow(Int(inst.p), static_cast<unsigned long>(inst.m)));
  std::vector<WittVector> out;
  for (const auto& x : enumerate_witt(inst.R, inst.p, inst.n, inst.budget))
    if (witt_frobenius(x) == target) out.push_back(x);
  return out;
}

// ---------------------------------------------------------------------------
// star product
// ---------------------------------------------------------------------------

RingElem star_product(const RingElem& a, const RingElem& b, const RingElem& c) {
  require_same_spec(a, b);
  require_same_spec(a, c);
  return a + b + c * a * b;
}

// ---------------------------------------------------------------------------
// QPoly
// ---------------------------------------------------------------------------

void QPoly::prune() {
  for (auto it = terms.begin(); it != terms.end();)
    it = (it->second == 0) ? terms.erase(it) : std::next(it);
}

QPoly QPoly::constant(const Rat& r) {
  QPoly q;
  if (r != 0) q.terms[{}] = r;
  return q;
}
QPoly QPoly::var_c() {
  QPoly q;
  q.terms[{1, 0, 0}] = 1;
  return q;
}
QPoly QPoly::var_x() {
  QPoly q;
  q.terms[{0, 1, 0}] = 1;
  return q;
}
QPoly QPoly::var_y() {
  QPoly q;
  q.terms[{0, 0, 1}] = 1;
  return q;
}

QPoly QPoly::operator+(const QPoly& o) const {
  QPoly r = *this;
  for (const auto& [m, v] : o.terms) r.terms[m] += v;
  r.prune();
  return r;
}
QPoly QPoly::operator-() const {
  QPoly r = *this;
  for (auto& [m, v] : r.terms) v = -v;
  return r;
}
QPoly QPoly::operator-(const QPoly& o) const { return *this + (-o); }

QPoly QPoly::mul(const QPoly& o, int M) const {
  QPoly r;
  for (const auto& [ma, va] : terms)
    for (const auto& [mb, vb] : o.terms) {
      QMono m{ma.c + mb.c, ma.x + mb.x, ma.y + mb.y};
      if (static_cast<int>(m.x + m.y) > M) continue;
      r.terms[m] += va * vb;
    }
  r.prune();
  return r;
}

QPoly QPoly::pow(unsigned e, int M) const {
  QPoly r = constant(1);
  for (unsigned i = 0; i < e; ++i) r = r.mul(*this, M);
  return r;
}

QPoly QPoly::subst_x(const QPoly& arg, int M) const {
  std::map<unsigned, QPoly> powers{{0u, constant(1)}};
  auto arg_pow = [&](unsigned e) -> const QPoly& {
    auto it = powers.find(e);
    if (it == powers.end()) it = powers.emplace(e, arg.pow(e, M)).first;
    return it->second;
  };
  QPoly r;
  for (const auto& [m, v] : terms) {
    QPoly t;
    t.terms[{m.c, 0, m.y}] = v;
    r = r + t.mul(arg_pow(m.x), M);
  }
  return r;
}

Rat QPoly::coeff(unsigned c, unsigned x, unsigned y) const {
  auto it = terms.find({c, x, y});
  return it == terms.end() ? Rat(0) : it->second;
}

std::string QPoly::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, v] : terms) {
    if (!first) os << " + ";
    first = false;
    os << v.get_str();
    if (m.c) os << "*c^" << m.c;
    if (m.x) os << "*x^" << m.x;
    if (m.y) os << "*y^" << m.y;
  }
  return os.str();
}

QPoly exp_G(int M) {
  if (M < 1) fail(Errc::BadPrecision, "series order must be >= 1");
  QPoly r;
  Int fact = 1;
  for (int n = 1; n <= M; ++n) {
    fact *= n;
    r.terms[{static_cast<unsigned>(n - 1), static_cast<unsigned>(n), 0}] = Rat(1) / Rat(fact);
  }
  return r;
}

QPoly log_G(int M) {
  if (M < 1) fail(Errc::BadPrecision, "series order must be >= 1");
  QPoly r;
  for (int n = 1; n <= M; ++n)
    r.terms[{static_cast<unsigned>(n - 1), static_cast<unsigned>(n), 0}] =
        Rat((n % 2 == 1) ? 1 : -1) / Rat(n);
  return r;
}

QPoly qp_star(const QPoly& a, const QPoly& b, int M) {
  return a + b + QPoly::var_c().mul(a, M).mul(b, M);
}

// ---------------------------------------------------------------------------
// integrality profile
// ---------------------------------------------------------------------------

namespace {

int legendre_vp_factorial(int n, long p) {
  int v = 0;
  long q = p;
  while (q <= n) {
    v += n / static_cast<int>(q);
    if (q > n / p) break;
    q *= p;
  }
  return v;
}

}  // namespace

IntegralityReport integrality_profile(const std::vector<Int>& eis, long p, int M) {
  if (!is_prime(p)) fail(Errc::BadPrecision, "p must be prime");
  if (M < 1) fail(Errc::BadPrecision, "need at least one term");
  const int e = static_cast<int>(eis.size());
  if (e == 0) fail(Errc::NotEisenstein, "E must have degree >= 1");
  for (size_t i = 0; i < eis.size(); ++i)
    if (eis[i] % p != 0)
      fail(Errc::NotEisenstein,
           "coefficient of degree " + std::to_string(i) + " not divisible by p");
  if (eis[0] == 0 || p_valuation(eis[0], p) != 1)
    fail(Errc::NotEisenstein, "constant term is not p times a unit");
  if (e == 1)
    fail(Errc::UnramifiedInput,
         "E' is a unit in the unramified case: G is G_m^sharp, no profile to take");

  // E'(pi) = e pi^{e-1} + sum_{i>=1} i c_i pi^{i-1} with v(pi) = 1/e, v(p) = 1;
  // the minimum is the valuation (distinct fractional parts for non-top terms)
  Rat v = Rat(p_valuation(Int(e), p)) + Rat(e - 1, e);
  for (int i = 1; i < e; ++i) {
    if (eis[static_cast<size_t>(i)] == 0) continue;
    Rat vi = Rat(p_valuation(Int(i) * eis[static_cast<size_t>(i)], p)) + Rat(i - 1, e);
    v = std::min(v, vi);
  }

  IntegralityReport rep;
  rep.p = p;
  rep.e = e;
  rep.v_eprime = v;
  rep.boundary = (v == Rat(1, p - 1));
  for (int n = 1; n <= M; ++n) {
    IntegralityTerm t;
    t.n = n;
    t.v_exp_coeff = v * (n - 1) - legendre_vp_factorial(n, p);
    t.v_log_coeff = v * (n - 1) - p_valuation(Int(n), p);
    t.exp_integral = t.v_exp_coeff >= 0;
    t.log_integral = t.v_log_coeff >= 0;
    rep.terms.push_back(t);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// prismatic logarithm
// ---------------------------------------------------------------------------

PrismaticLog prismatic_log(const RingElem& z, int K) {
  const SpecPtr& S = z.spec();
  if (S->z_based() || S->nvars() != 0)
    fail(Errc::UnsupportedCarrier, "prismatic_log is defined on Z/p^N scalars");
  const long p = S->p();
  const int N = S->padic_digits();
  if (K < 1) fail(Errc::InsufficientTerms, "need at least one term");
  // term k has v_p >= (k-1) - v_p(k); require the first dropped term to clear N
  {
    const int k = K + 1;
    if (k - 1 - p_valuation(Int(k), p) < N)
      fail(Errc::InsufficientTerms,
           "term " + std::to_string(k) + " is not yet below p^" + std::to_string(N));
  }
  const Int zc = z.is_zero() ? Int(0) : z.constant_coeff();
  Rat sum = 0;
  Int pk = 1;  // p^{k-1}
  Int zk = 1;  // z^k (canonical lift)
  for (int k = 1; k <= K; ++k) {
    zk *= zc;
    sum += Rat((k % 2 == 1) ? 1 : -1) * Rat(pk * zk) / Rat(k);
    pk *= p;
  }
  sum.canonicalize();
  const Int den = sum.get_den();
  if (den != 0 && den % p == 0)
    fail(Errc::PrecisionExhausted, "series denominator is divisible by p");
  Int inv;
  const Int mod = S->modulus();
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
    fail(Errc::PrecisionExhausted, "series denominator is not invertible");
  return {RingElem::constant(S, sum.get_num() * inv), 0};
}

}  // namespace prismkit
