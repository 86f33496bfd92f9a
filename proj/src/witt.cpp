#include "prismkit/witt.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>
#include <tuple>

namespace prismkit {

const char* witt_op_name(WittOp op) {
  switch (op) {
    case WittOp::Sum: return "sum";
    case WittOp::Product: return "product";
    case WittOp::Negation: return "negation";
    case WittOp::Frobenius: return "frobenius";
    case WittOp::Delta: return "delta";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// universal polynomials
// ---------------------------------------------------------------------------

namespace {

bool op_is_binary(WittOp op) { return op == WittOp::Sum || op == WittOp::Product; }
bool op_needs_extra_var(WittOp op) { return op == WittOp::Frobenius || op == WittOp::Delta; }

// gamma_m over the given component list: sum of p^i c_i^{p^(m-i)}
RingElem gamma(const std::vector<RingElem>& c, long p, int m) {
  RingElem out = RingElem::zero(c.at(0).spec());
  for (int i = 0; i <= m; ++i) {
    unsigned long pw = 1;
    for (int j = 0; j < m - i; ++j) pw *= static_cast<unsigned long>(p);
    out = out + c.at(i).pow(pw) * pow_pk(p, i);
  }
  return out;
}

RingElem generate_universal(long p, WittOp op, int index) {
  const int avars = op_needs_extra_var(op) ? index + 2 : index + 1;
  std::vector<std::string> names;
  for (int i = 0; i < avars; ++i) names.push_back("a" + std::to_string(i));
  if (op_is_binary(op))
    for (int i = 0; i <= index; ++i) names.push_back("b" + std::to_string(i));
  SpecPtr V = RingSpec::poly(RingSpec::integers(), names);
  std::vector<RingElem> a, b;
  for (int i = 0; i < avars; ++i) a.push_back(RingElem::var(V, i));
  if (op_is_binary(op))
    for (int i = 0; i <= index; ++i) b.push_back(RingElem::var(V, avars + i));

  auto ghost_target = [&](int m) -> RingElem {
    switch (op) {
      case WittOp::Sum: return gamma(a, p, m) + gamma(b, p, m);
      case WittOp::Product: return gamma(a, p, m) * gamma(b, p, m);
      case WittOp::Negation: return -gamma(a, p, m);
      case WittOp::Frobenius: return gamma(a, p, m + 1);
      case WittOp::Delta: {
        auto num = gamma(a, p, m + 1) - gamma(a, p, m).pow(static_cast<unsigned long>(p));
        auto q = divide_exact(num, p);
        if (!q) fail(Errc::IntegralityFailure, "delta ghost target not divisible by p");
        return *q;
      }
    }
    fail(Errc::IntegralityFailure, "unreachable");
  };

  std::vector<RingElem> R;
  for (int m = 0; m <= index; ++m) {
    RingElem c = ghost_target(m);
    for (int i = 0; i < m; ++i) {
      unsigned long pw = 1;
      for (int j = 0; j < m - i; ++j) pw *= static_cast<unsigned long>(p);
      c = c - R[i].pow(pw) * pow_pk(p, i);
    }
    auto q = divide_exact(c, pow_pk(p, m));
    if (!q)
      fail(Errc::IntegralityFailure, std::string("universal ") + witt_op_name(op) +
                                         " polynomial failed Dwork integrality at index " +
                                         std::to_string(m));
    R.push_back(*q);
  }
  return R.back();
}

std::shared_mutex table_mutex;
std::map<std::tuple<long, int, int>, RingElem> table;

}  // namespace

RingElem universal_poly(long p, WittOp op, int index, int cap) {
  if (index < 0) fail(Errc::BadPrecision, "negative index");
  if (index > cap)
    fail(Errc::CapExceeded, "universal polynomial index " + std::to_string(index) +
                                " exceeds cap " + std::to_string(cap));
  const auto key = std::make_tuple(p, static_cast<int>(op), index);
  {
    std::shared_lock lk(table_mutex);
    auto it = table.find(key);
    if (it != table.end()) return it->second;
  }
  std::unique_lock lk(table_mutex);
  auto it = table.find(key);
  if (it != table.end()) return it->second;
  return table.emplace(key, generate_universal(p, op, index)).first->second;
}

// ---------------------------------------------------------------------------
// Witt vector operations
// ---------------------------------------------------------------------------

namespace {

long carrier_p(const WittVector& x) { return x.p; }

WittVector eval_binary(WittOp op, const WittVector& x, const WittVector& y) {
  if (x.p != y.p || x.length() != y.length())
    fail(Errc::SpecMismatch, "Witt operands differ in prime or length");
  require_same_spec(x.comps[0], y.comps[0]);
  std::vector<RingElem> out;
  for (int m = 0; m < x.length(); ++m) {
    auto poly = universal_poly(x.p, op, m);
    std::vector<RingElem> images;
    for (int i = 0; i <= m; ++i) images.push_back(x.comps[i]);
    for (int i = 0; i <= m; ++i) images.push_back(y.comps[i]);
    out.push_back(hom_apply(poly, images, x.spec()));
  }
  return WittVector(x.p, std::move(out));
}

}  // namespace

std::string WittVector::str() const {
  std::string out = "(";
  for (int i = 0; i < length(); ++i) out += (i ? "; " : "") + comps[i].str();
  return out + ")";
}

WittVector witt_zero(const SpecPtr& spec, long p, int n) {
  return WittVector(p, std::vector<RingElem>(static_cast<size_t>(n), RingElem::zero(spec)));
}

WittVector witt_one(const SpecPtr& spec, long p, int n) {
  return teichmuller(RingElem::one(spec), p, n);
}

WittVector witt_from_int(const SpecPtr& spec, long p, int n, const Int& c) {
  Int a = c < 0 ? Int(-c) : c;
  WittVector acc = witt_zero(spec, p, n);
  WittVector base = witt_one(spec, p, n);
  const size_t bits = mpz_sizeinbase(a.get_mpz_t(), 2);
  for (size_t i = 0; a != 0 && i < bits; ++i) {
    if (mpz_tstbit(a.get_mpz_t(), i)) acc = witt_add(acc, base);
    if (i + 1 < bits) base = witt_add(base, base);
  }
  return c < 0 ? witt_neg(acc) : acc;
}

WittVector witt_add(const WittVector& x, const WittVector& y) { return eval_binary(WittOp::Sum, x, y); }
WittVector witt_mul(const WittVector& x, const WittVector& y) { return eval_binary(WittOp::Product, x, y); }
WittVector witt_sub(const WittVector& x, const WittVector& y) { return witt_add(x, witt_neg(y)); }

WittVector witt_neg(const WittVector& x) {
  std::vector<RingElem> out;
  for (int m = 0; m < x.length(); ++m) {
    auto poly = universal_poly(x.p, WittOp::Negation, m);
    std::vector<RingElem> images(x.comps.begin(), x.comps.begin() + m + 1);
    out.push_back(hom_apply(poly, images, x.spec()));
  }
  return WittVector(x.p, std::move(out));
}

WittVector teichmuller(const RingElem& r, long p, int n) {
  std::vector<RingElem> out(static_cast<size_t>(n), RingElem::zero(r.spec()));
  out[0] = r;
  return WittVector(p, std::move(out));
}

WittVector verschiebung(const WittVector& x) {
  std::vector<RingElem> out;
  out.push_back(RingElem::zero(x.spec()));
  for (int i = 0; i + 1 < x.length(); ++i) out.push_back(x.comps[i]);
  return WittVector(x.p, std::move(out));
}

WittVector verschiebung_up(const WittVector& x) {
  std::vector<RingElem> out;
  out.push_back(RingElem::zero(x.spec()));
  for (const auto& c : x.comps) out.push_back(c);
  return WittVector(x.p, std::move(out));
}

WittVector witt_pow(const WittVector& x, unsigned long e) {
  WittVector acc = witt_one(x.spec(), x.p, x.length());
  WittVector base = x;
  while (e > 0) {
    if (e & 1) acc = witt_mul(acc, base);
    base = (e >>= 1) ? witt_mul(base, base) : base;
  }
  return acc;
}

WittVector restriction(const WittVector& x) {
  if (x.length() < 2) fail(Errc::LengthUnderflow, "restriction needs length >= 2");
  return WittVector(x.p, {x.comps.begin(), x.comps.end() - 1});
}

WittVector witt_frobenius(const WittVector& x, bool force_universal) {
  if (x.length() < 2) fail(Errc::LengthUnderflow, "frobenius needs length >= 2");
  const long p = carrier_p(x);
  if (!force_universal && x.spec()->is_char_p()) {
    std::vector<RingElem> out;
    for (int i = 0; i + 1 < x.length(); ++i)
      out.push_back(x.comps[i].pow(static_cast<unsigned long>(p)));
    return WittVector(p, std::move(out));
  }
  std::vector<RingElem> out;
  for (int m = 0; m + 1 < x.length(); ++m) {
    auto poly = universal_poly(p, WittOp::Frobenius, m);
    std::vector<RingElem> images(x.comps.begin(), x.comps.begin() + m + 2);
    out.push_back(hom_apply(poly, images, x.spec()));
  }
  return WittVector(p, std::move(out));
}

RingElem ghost_component(const WittVector& x, int m) {
  if (m < 0 || m >= x.length()) fail(Errc::BadPrecision, "ghost index out of range");
  return gamma(x.comps, x.p, m);
}

std::vector<RingElem> ghost(const WittVector& x) {
  std::vector<RingElem> out;
  for (int m = 0; m < x.length(); ++m) out.push_back(ghost_component(x, m));
  return out;
}

FromGhostResult from_ghost(const std::vector<RingElem>& g, long p) {
  if (g.empty()) fail(Errc::LengthUnderflow, "from_ghost needs length >= 1");
  const SpecPtr& spec = g[0].spec();
  for (const auto& e : g) require_same_spec(g[0], e);
  const bool zb = spec->z_based();
  std::vector<RingElem> a;
  std::vector<int> losses;
  for (int m = 0; m < static_cast<int>(g.size()); ++m) {
    if (m == 0) {
      a.push_back(g[0]);
      losses.push_back(0);
      continue;
    }
    RingElem c = g[m];
    for (int i = 0; i < m; ++i) {
      unsigned long pw = 1;
      for (int j = 0; j < m - i; ++j) pw *= static_cast<unsigned long>(p);
      c = c - a[i].pow(pw) * pow_pk(p, i);
    }
    if (zb) {
      auto q = divide_exact(c, pow_pk(p, m));
      if (!q) fail(Errc::NonIntegralGhost, "ghost correction at index " + std::to_string(m) +
                                               " not divisible by p^" + std::to_string(m));
      a.push_back(*q);
      losses.push_back(0);
    } else {
      if (spec->padic_digits() - m < 1)
        fail(Errc::PrecisionExhausted, "no digits left inverting ghost at index " + std::to_string(m));
      const Int pm = pow_pk(p, m);
      std::map<Monomial, Int> t;
      for (const auto& [mono, coeff] : c.terms()) {
        if (coeff % pm != 0)
          fail(Errc::NonIntegralGhost, "ghost correction at index " + std::to_string(m) +
                                           " not divisible by p^" + std::to_string(m));
        t[mono] = coeff / pm;
      }
      a.push_back(RingElem::make(spec, std::move(t)));
      losses.push_back(m);
    }
  }
  return {WittVector(p, std::move(a)), std::move(losses)};
}

bool is_ga_sharp(const WittVector& x) { return witt_frobenius(x).is_zero(); }

bool is_gm_sharp(const WittVector& x) {
  if (!x.comps[0].is_unit()) return false;
  return witt_frobenius(x) == witt_one(x.spec(), x.p, x.length() - 1);
}

std::vector<WittVector> enumerate_witt(const SpecPtr& spec, long p, int n, size_t budget) {
  auto elems = enumerate_elements(spec, budget);
  double total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<double>(elems.size());
  if (total > static_cast<double>(budget))
    fail(Errc::EnumerationBudgetExceeded, "W_n enumeration exceeds budget");
  std::vector<WittVector> out;
  std::vector<size_t> idx(static_cast<size_t>(n), 0);
  while (true) {
    std::vector<RingElem> comps;
    for (int i = 0; i < n; ++i) comps.push_back(elems[idx[static_cast<size_t>(i)]]);
    out.emplace_back(p, std::move(comps));
    size_t i = 0;
    while (i < idx.size()) {
      if (++idx[i] < elems.size()) break;
      idx[i] = 0;
      ++i;
    }
    if (i == idx.size()) break;
  }
  return out;
}

}  // namespace prismkit
