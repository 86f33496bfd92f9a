#include "prismkit/ring.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <sstream>

namespace prismkit {

Int int_pow(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Int pow_pk(long p, int k) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  return r;
}

int p_valuation(const Int& a, long p) {
  Int rest, pp = p;
  return static_cast<int>(mpz_remove(rest.get_mpz_t(), a.get_mpz_t(), pp.get_mpz_t()));
}

// ---------------------------------------------------------------------------
// RingSpec
// ---------------------------------------------------------------------------

static void check_vars(const std::vector<std::string>& vars) {
  if (vars.empty()) fail(Errc::UnsupportedRelationSet, "polynomial carrier needs at least one variable");
  for (const auto& v : vars) {
    if (v.empty() || !std::isalpha(static_cast<unsigned char>(v[0])))
      fail(Errc::UnsupportedRelationSet, "variable name must start with a letter: '" + v + "'");
    for (char c : v)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
        fail(Errc::UnsupportedRelationSet, "bad character in variable name: '" + v + "'");
  }
  for (size_t i = 0; i < vars.size(); ++i)
    for (size_t j = i + 1; j < vars.size(); ++j)
      if (vars[i] == vars[j]) fail(Errc::UnsupportedRelationSet, "duplicate variable: " + vars[i]);
}

static void check_scalar_base(const SpecPtr& base) {
  if (!base) fail(Errc::UnsupportedRelationSet, "null base spec");
  switch (base->kind()) {
    case RingSpec::Kind::Integers:
    case RingSpec::Kind::IntegersModPN:
    case RingSpec::Kind::PrimeField:
      return;
    default:
      fail(Errc::UnsupportedRelationSet, "composite specs may only nest over Z, Z/p^N, or F_p");
  }
}

SpecPtr RingSpec::integers() {
  auto s = std::shared_ptr<RingSpec>(new RingSpec());
  s->kind_ = Kind::Integers;
  s->finalize();
  return s;
}

SpecPtr RingSpec::integers_mod_pn(long p, int N) {
  if (!is_prime(p)) fail(Errc::BadPrecision, "p must be prime");
  if (N < 1) fail(Errc::BadPrecision, "N must be >= 1");
  auto s = std::shared_ptr<RingSpec>(new RingSpec());
  s->kind_ = (N == 1) ? Kind::PrimeField : Kind::IntegersModPN;
  s->p_ = p;
  s->padic_digits_ = N;
  s->modulus_ = pow_pk(p, N);
  s->finalize();
  return s;
}

SpecPtr RingSpec::prime_field(long p) { return integers_mod_pn(p, 1); }

SpecPtr RingSpec::poly(const SpecPtr& base, std::vector<std::string> vars) {
  check_scalar_base(base);
  check_vars(vars);
  auto s = std::shared_ptr<RingSpec>(new RingSpec(*base));
  s->kind_ = Kind::PolyQuotient;
  s->vars_ = std::move(vars);
  s->finalize();
  return s;
}

// drop generators divisible by another generator; sort graded-lex
static std::vector<Monomial> minimalize_ideal(std::vector<Monomial> gens) {
  std::vector<Monomial> out;
  for (size_t i = 0; i < gens.size(); ++i) {
    bool redundant = false;
    for (size_t j = 0; j < gens.size() && !redundant; ++j)
      if (i != j && gens[i].divisible_by(gens[j]) && !(gens[i] == gens[j] && i < j)) redundant = true;
    if (!redundant) out.push_back(gens[i]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SpecPtr RingSpec::poly_quotient(const SpecPtr& base, std::vector<std::string> vars,
                                std::vector<Monomial> monomial_ideal) {
  check_scalar_base(base);
  check_vars(vars);
  for (auto& m : monomial_ideal) {
    if (m.e.size() != vars.size())
      fail(Errc::UnsupportedRelationSet, "ideal generator arity does not match variable count");
    if (m.is_one()) fail(Errc::UnsupportedRelationSet, "unit ideal is not a carrier");
  }
  auto s = std::shared_ptr<RingSpec>(new RingSpec(*base));
  s->kind_ = Kind::PolyQuotient;
  s->vars_ = std::move(vars);
  s->monomial_ideal_ = minimalize_ideal(std::move(monomial_ideal));
  s->finalize();
  return s;
}

SpecPtr RingSpec::power_series_trunc(const SpecPtr& base, std::vector<std::string> vars, int order) {
  check_scalar_base(base);
  check_vars(vars);
  if (order < 1) fail(Errc::BadPrecision, "series order must be >= 1");
  // truncation ideal = all monomials of total degree exactly `order`
  std::vector<Monomial> gens;
  const size_t k = vars.size();
  Monomial cur(k);
  // enumerate compositions of `order` into k parts
  std::vector<unsigned> comp(k, 0);
  comp[0] = static_cast<unsigned>(order);
  while (true) {
    Monomial m(k);
    m.e = comp;
    gens.push_back(m);
    // next composition
    size_t i = 0;
    while (i + 1 < k && comp[i] == 0) ++i;
    if (i + 1 >= k) break;
    unsigned v = comp[i];
    comp[i] = 0;
    comp[i + 1] += 1;
    comp[0] = v - 1;
  }
  auto s = std::shared_ptr<RingSpec>(new RingSpec(*base));
  s->kind_ = Kind::PowerSeriesTrunc;
  s->vars_ = std::move(vars);
  s->monomial_ideal_ = minimalize_ideal(std::move(gens));
  s->series_order_ = order;
  s->finalize();
  return s;
}

SpecPtr RingSpec::eisenstein_quotient(const SpecPtr& base, const std::string& var,
                                      std::vector<Int> monic_coeffs, Errc on_bad_shape) {
  check_scalar_base(base);
  check_vars({var});
  if (base->z_based())
    fail(Errc::UnsupportedRelationSet, "Eisenstein quotients require a Z/p^N base");
  if (monic_coeffs.empty())
    fail(on_bad_shape, "Eisenstein relation must have degree >= 1");
  const long p = base->p();
  const Int& m = base->modulus();
  std::vector<Int> cs = std::move(monic_coeffs);
  for (auto& c : cs) {
    c %= m;
    if (c < 0) c += m;
  }
  // Shape: all lower coefficients divisible by p, constant term p * unit.
  for (size_t i = 0; i < cs.size(); ++i)
    if (cs[i] % p != 0)
      fail(on_bad_shape, "coefficient of degree " + std::to_string(i) + " not divisible by p");
  if (cs[0] == 0 || p_valuation(cs[0], p) != 1)
    fail(on_bad_shape, "constant term is not p times a unit");
  auto s = std::shared_ptr<RingSpec>(new RingSpec(*base));
  s->kind_ = Kind::PolyQuotient;
  s->vars_ = {var};
  s->eisenstein_ = std::move(cs);
  s->finalize();
  return s;
}

bool RingSpec::is_local() const {
  if (z_based()) return false;
  for (size_t i = 0; i < vars_.size(); ++i) {
    bool bounded = (i == 0 && has_eisenstein());
    for (const auto& g : monomial_ideal_) {
      bool pure = true;
      for (size_t j = 0; j < g.e.size(); ++j)
        if (j != i && g.e[j] != 0) pure = false;
      if (pure && g.e[i] > 0) bounded = true;
    }
    if (!bounded) return false;
  }
  return true;
}

int RingSpec::var_index(const std::string& name) const {
  for (size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == name) return static_cast<int>(i);
  return -1;
}

SpecPtr RingSpec::with_vars_appended(const std::vector<std::string>& extra) const {
  std::vector<std::string> all = vars_;
  all.insert(all.end(), extra.begin(), extra.end());
  check_vars(all);
  auto s = std::shared_ptr<RingSpec>(new RingSpec(*this));
  s->kind_ = Kind::PolyQuotient;
  s->vars_ = std::move(all);
  for (auto& g : s->monomial_ideal_) g.e.resize(s->vars_.size(), 0);
  s->series_order_ = 0;
  s->finalize();
  return s;
}

SpecPtr RingSpec::p_adic_lift(int extra_digits) const {
  if (z_based()) fail(Errc::UnsupportedCarrier, "p-adic lift of a Z-based carrier");
  if (extra_digits < 0) fail(Errc::BadPrecision, "negative lift");
  auto s = std::shared_ptr<RingSpec>(new RingSpec(*this));
  s->padic_digits_ = padic_digits_ + extra_digits;
  s->modulus_ = pow_pk(p_, s->padic_digits_);
  if (s->vars_.empty()) s->kind_ = (s->padic_digits_ == 1) ? Kind::PrimeField : Kind::IntegersModPN;
  s->finalize();
  return s;
}

SpecPtr RingSpec::p_adic_downgrade(int k) const {
  if (z_based()) fail(Errc::UnsupportedCarrier, "p-adic downgrade of a Z-based carrier");
  if (k < 0) fail(Errc::BadPrecision, "negative downgrade");
  if (k == 0) return shared_from_this();
  if (padic_digits_ - k < 1) fail(Errc::PrecisionExhausted, "no p-adic digits left");
  auto s = std::shared_ptr<RingSpec>(new RingSpec(*this));
  s->padic_digits_ = padic_digits_ - k;
  s->modulus_ = pow_pk(p_, s->padic_digits_);
  if (s->padic_digits_ == 1 && s->vars_.empty()) s->kind_ = Kind::PrimeField;
  s->finalize();
  return s;
}

void RingSpec::finalize() {
  // An Eisenstein relation whose coefficients all vanished (e.g. after a
  // p-adic downgrade to the residue field) degenerates to the monomial u^e.
  if (has_eisenstein()) {
    bool all_zero = true;
    for (auto& c : eisenstein_) {
      c %= modulus_;
      if (c < 0) c += modulus_;
      if (c != 0) all_zero = false;
    }
    if (all_zero) {
      Monomial g(vars_.size());
      g.e[0] = static_cast<unsigned>(eisenstein_.size());
      monomial_ideal_.push_back(g);
      monomial_ideal_ = minimalize_ideal(std::move(monomial_ideal_));
      eisenstein_.clear();
    }
  }
  id_ = render_id();
}

static std::string monomial_str(const Monomial& m, const std::vector<std::string>& vars) {
  std::string out;
  for (size_t i = 0; i < m.e.size(); ++i) {
    if (m.e[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += vars[i];
    if (m.e[i] > 1) out += "^" + std::to_string(m.e[i]);
  }
  return out.empty() ? "1" : out;
}

std::string RingSpec::render_id() const {
  std::string base;
  if (z_based())
    base = "Z";
  else if (padic_digits_ == 1)
    base = "F_" + std::to_string(p_);
  else
    base = "Z/" + std::to_string(p_) + "^" + std::to_string(padic_digits_);
  if (vars_.empty()) return base;

  std::string out = base;
  if (kind_ == Kind::PowerSeriesTrunc) {
    out += "[[";
    for (size_t i = 0; i < vars_.size(); ++i) out += (i ? "," : "") + vars_[i];
    out += "]]_" + std::to_string(series_order_);
    return out;
  }
  out += "[";
  for (size_t i = 0; i < vars_.size(); ++i) out += (i ? "," : "") + vars_[i];
  out += "]";
  std::vector<std::string> rels;
  if (has_eisenstein()) {
    const size_t e = eisenstein_.size();
    std::string r = vars_[0] + (e > 1 ? "^" + std::to_string(e) : "");
    for (size_t i = e; i-- > 0;) {
      if (eisenstein_[i] == 0) continue;
      r += "+";
      if (i == 0)
        r += eisenstein_[i].get_str();
      else {
        if (eisenstein_[i] != 1) r += eisenstein_[i].get_str() + "*";
        r += vars_[0] + (i > 1 ? "^" + std::to_string(i) : "");
      }
    }
    rels.push_back(r);
  }
  for (const auto& g : monomial_ideal_) rels.push_back(monomial_str(g, vars_));
  if (!rels.empty()) {
    out += "/(";
    for (size_t i = 0; i < rels.size(); ++i) out += (i ? "," : "") + rels[i];
    out += ")";
  }
  return out;
}

std::vector<Monomial> RingSpec::monomial_basis(size_t cap) const {
  std::set<Monomial> seen;
  std::deque<Monomial> work;
  Monomial one(vars_.size());
  seen.insert(one);
  work.push_back(one);
  auto reducible = [&](const Monomial& m) {
    for (const auto& g : monomial_ideal_)
      if (m.divisible_by(g)) return true;
    if (has_eisenstein() && !vars_.empty() && m.e[0] >= eisenstein_.size()) return true;
    return false;
  };
  while (!work.empty()) {
    Monomial m = work.front();
    work.pop_front();
    for (size_t i = 0; i < vars_.size(); ++i) {
      Monomial nx = m;
      nx.e[i] += 1;
      if (reducible(nx) || seen.count(nx)) continue;
      seen.insert(nx);
      if (seen.size() > cap)
        fail(Errc::EnumerationBudgetExceeded, "monomial basis exceeds cap (infinite or too large)");
      work.push_back(nx);
    }
  }
  return {seen.begin(), seen.end()};
}

bool RingSpec::is_finite() const {
  if (z_based()) return false;
  try {
    (void)monomial_basis();
    return true;
  } catch (const Error&) {
    return false;
  }
}

Int RingSpec::cardinality(size_t basis_cap) const {
  if (z_based()) fail(Errc::UnsupportedCarrier, "infinite carrier");
  auto basis = monomial_basis(basis_cap);
  Int card;
  mpz_pow_ui(card.get_mpz_t(), modulus_.get_mpz_t(), basis.size());
  return card;
}

// ---------------------------------------------------------------------------
// RingElem
// ---------------------------------------------------------------------------

RingElem RingElem::constant(SpecPtr spec, Int c) {
  std::map<Monomial, Int> t;
  t[Monomial(spec->nvars())] = std::move(c);
  return make(std::move(spec), std::move(t));
}

RingElem RingElem::var(SpecPtr spec, size_t idx, unsigned exp, Int coeff) {
  if (idx >= spec->nvars()) fail(Errc::UnsupportedQuery, "variable index out of range");
  Monomial m(spec->nvars());
  m.e[idx] = exp;
  std::map<Monomial, Int> t;
  t[m] = std::move(coeff);
  return make(std::move(spec), std::move(t));
}

RingElem RingElem::make(SpecPtr spec, std::map<Monomial, Int> raw) {
  RingElem r(std::move(spec));
  r.terms_ = std::move(raw);
  r.normalize();
  return r;
}

void RingElem::normalize() {
  const RingSpec& s = *spec_;
  const auto& ideal = s.monomial_ideal();
  const auto& eis = s.eisenstein();
  const size_t e = eis.size();
  auto reducible_by_ideal = [&](const Monomial& m) {
    for (const auto& g : ideal)
      if (m.divisible_by(g)) return true;
    return false;
  };

  std::map<Monomial, Int> out;
  std::deque<std::pair<Monomial, Int>> work(terms_.begin(), terms_.end());
  while (!work.empty()) {
    auto [m, c] = std::move(work.front());
    work.pop_front();
    if (c == 0) continue;
    if (reducible_by_ideal(m)) continue;
    if (e > 0 && m.e[0] >= e) {
      // one Eisenstein step: u^e -> -(c_{e-1} u^{e-1} + ... + c_0)
      Monomial base = m;
      base.e[0] -= static_cast<unsigned>(e);
      for (size_t i = 0; i < e; ++i) {
        if (eis[i] == 0) continue;
        Monomial t = base;
        t.e[0] += static_cast<unsigned>(i);
        work.emplace_back(t, -(c * eis[i]));
      }
      continue;
    }
    out[m] += c;
  }
  if (!s.z_based()) {
    const Int& mod = s.modulus();
    for (auto it = out.begin(); it != out.end();) {
      it->second %= mod;
      if (it->second < 0) it->second += mod;
      it = (it->second == 0) ? out.erase(it) : std::next(it);
    }
  } else {
    for (auto it = out.begin(); it != out.end();)
      it = (it->second == 0) ? out.erase(it) : std::next(it);
  }
  terms_ = std::move(out);
}

bool RingElem::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Int RingElem::constant_coeff() const {
  auto it = terms_.find(Monomial(spec_->nvars()));
  return it == terms_.end() ? Int(0) : it->second;
}

unsigned RingElem::degree() const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
  return d;
}

RingElem RingElem::operator+(const RingElem& o) const {
  require_same_spec(*this, o);
  std::map<Monomial, Int> t = terms_;
  for (const auto& [m, c] : o.terms_) t[m] += c;
  return make(spec_, std::move(t));
}

RingElem RingElem::operator-() const {
  std::map<Monomial, Int> t;
  for (const auto& [m, c] : terms_) t[m] = -c;
  return make(spec_, std::move(t));
}

RingElem RingElem::operator-(const RingElem& o) const { return *this + (-o); }

RingElem RingElem::operator*(const RingElem& o) const {
  require_same_spec(*this, o);
  std::map<Monomial, Int> t;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) t[ma * mb] += ca * cb;
  return make(spec_, std::move(t));
}

RingElem RingElem::operator*(const Int& c) const {
  std::map<Monomial, Int> t;
  for (const auto& [m, cc] : terms_) t[m] = cc * c;
  return make(spec_, std::move(t));
}

RingElem RingElem::pow(unsigned long e) const {
  RingElem acc = one(spec_);
  RingElem base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = (e >>= 1) ? base * base : base;
  }
  return acc;
}

bool RingElem::operator==(const RingElem& o) const {
  return spec_ && o.spec_ && spec_->same(*o.spec_) && terms_ == o.terms_;
}

bool RingElem::is_unit() const {
  if (!spec_->is_local()) fail(Errc::UnsupportedQuery, "unit test only defined on local carriers");
  return constant_coeff() % spec_->p() != 0;
}

RingElem RingElem::invert() const {
  if (!is_unit()) fail(Errc::NotAUnit, "element is not a unit: " + str());
  const Int c = constant_coeff();
  Int cinv;
  if (mpz_invert(cinv.get_mpz_t(), c.get_mpz_t(), spec_->modulus().get_mpz_t()) == 0)
    fail(Errc::NotAUnit, "constant term not invertible modulo p^N");
  // a = c(1 - r) with r nilpotent; a^{-1} = c^{-1} (1 + r + r^2 + ...)
  RingElem r = one(spec_) - (*this * cinv);
  RingElem acc = one(spec_);
  RingElem pw = r;
  int guard = 0;
  while (!pw.is_zero()) {
    acc = acc + pw;
    pw = pw * r;
    if (++guard > 4096) fail(Errc::UnsupportedCarrier, "nilpotence bound not reached in invert");
  }
  return acc * cinv;
}

std::pair<RingElem, int> RingElem::div_exact_by_p(int k) const {
  if (k < 0) fail(Errc::BadPrecision, "negative division exponent");
  if (k == 0) return {*this, 0};
  if (spec_->z_based())
    fail(Errc::UnsupportedCarrier, "div_exact_by_p needs a p-adic carrier; use divide_exact over Z");
  const Int d = pow_pk(spec_->p(), k);
  SpecPtr down = spec_->p_adic_downgrade(k);
  std::map<Monomial, Int> t;
  for (const auto& [m, c] : terms_) {
    if (c % d != 0)
      fail(Errc::NotDivisible, "coefficient " + c.get_str() + " of " + monomial_str(m, spec_->vars()) +
                                   " not divisible by p^" + std::to_string(k));
    t[m] = c / d;
  }
  return {make(down, std::move(t)), k};
}

std::string RingElem::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    std::string piece;
    if (m.is_one())
      piece = c.get_str();
    else if (c == 1)
      piece = monomial_str(m, spec_->vars());
    else if (c == -1)
      piece = "-" + monomial_str(m, spec_->vars());
    else
      piece = c.get_str() + "*" + monomial_str(m, spec_->vars());
    if (out.empty())
      out = piece;
    else if (!piece.empty() && piece[0] == '-')
      out += " - " + piece.substr(1);
    else
      out += " + " + piece;
  }
  return out;
}

// ---------------------------------------------------------------------------
// homomorphisms / evaluation
// ---------------------------------------------------------------------------

RingElem eval_at(const RingElem& a, const std::vector<RingElem>& images, const SpecPtr& target) {
  if (images.size() != a.spec()->nvars())
    fail(Errc::SpecMismatch, "substitution arity does not match source variable count");
  for (const auto& img : images)
    if (!img.spec()->same(*target)) fail(Errc::SpecMismatch, "image element outside target spec");
  std::vector<std::map<unsigned, RingElem>> powcache(images.size());
  auto power = [&](size_t i, unsigned e) -> const RingElem& {
    auto it = powcache[i].find(e);
    if (it != powcache[i].end()) return it->second;
    return powcache[i].emplace(e, images[i].pow(e)).first->second;
  };
  std::map<Monomial, Int> acc;
  for (const auto& [m, c] : a.terms()) {
    RingElem term = RingElem::constant(target, c);
    for (size_t i = 0; i < images.size(); ++i)
      if (m.e[i] > 0) term = term * power(i, m.e[i]);
    for (const auto& [tm, tc] : term.terms()) acc[tm] += tc;
  }
  return RingElem::make(target, std::move(acc));
}

RingElem hom_apply(const RingElem& a, const std::vector<RingElem>& images, const SpecPtr& target) {
  const RingSpec& src = *a.spec();
  if (images.size() != src.nvars())
    fail(Errc::SpecMismatch, "substitution arity does not match source variable count");
  if (!src.z_based() && !RingElem::constant(target, src.modulus()).is_zero())
    fail(Errc::RelationViolated, "source modulus " + src.modulus().get_str() + " nonzero in target");
  for (const auto& g : src.monomial_ideal()) {
    RingElem img = RingElem::one(target);
    for (size_t i = 0; i < g.e.size(); ++i)
      if (g.e[i] > 0) img = img * images[i].pow(g.e[i]);
    if (!img.is_zero())
      fail(Errc::RelationViolated, "ideal generator " + monomial_str(g, src.vars()) + " maps to " + img.str());
  }
  if (src.has_eisenstein()) {
    const auto& cs = src.eisenstein();
    RingElem val = images[0].pow(cs.size());
    for (size_t i = 0; i < cs.size(); ++i) val = val + images[0].pow(i) * cs[i];
    if (!val.is_zero())
      fail(Errc::RelationViolated, "Eisenstein relation maps to " + val.str());
  }
  return eval_at(a, images, target);
}

std::vector<RingElem> enumerate_elements(const SpecPtr& spec, size_t budget) {
  if (spec->z_based()) fail(Errc::EnumerationBudgetExceeded, "Z-based carrier is infinite");
  auto basis = spec->monomial_basis(budget);
  const Int& m = spec->modulus();
  Int total;
  mpz_pow_ui(total.get_mpz_t(), m.get_mpz_t(), basis.size());
  if (total > static_cast<unsigned long>(budget))
    fail(Errc::EnumerationBudgetExceeded,
         "carrier has " + total.get_str() + " elements, budget " + std::to_string(budget));
  std::vector<RingElem> out;
  out.reserve(total.get_ui());
  std::vector<Int> digits(basis.size(), 0);
  while (true) {
    std::map<Monomial, Int> t;
    for (size_t i = 0; i < basis.size(); ++i)
      if (digits[i] != 0) t[basis[i]] = digits[i];
    out.push_back(RingElem::make(spec, std::move(t)));
    size_t i = 0;
    while (i < digits.size()) {
      digits[i] += 1;
      if (digits[i] < m) break;
      digits[i] = 0;
      ++i;
    }
    if (i == digits.size()) break;
  }
  return out;
}

std::optional<RingElem> div_exact(const RingElem& a, const RingElem& b) {
  require_same_spec(a, b);
  if (b.is_zero()) return std::nullopt;
  const SpecPtr& spec = a.spec();
  // leading term of b in graded-lex (largest monomial)
  const auto& bl = *b.terms().rbegin();
  Int lead_inv;
  bool lead_unit = false;
  if (spec->z_based()) {
    lead_unit = (bl.second == 1 || bl.second == -1);
  } else if (mpz_invert(lead_inv.get_mpz_t(), bl.second.get_mpz_t(), spec->modulus().get_mpz_t())) {
    lead_unit = true;
  }
  RingElem rem = a;
  RingElem quot = RingElem::zero(spec);
  int guard = 0;
  while (!rem.is_zero()) {
    const auto& rl = *rem.terms().rbegin();
    if (!rl.first.divisible_by(bl.first)) return std::nullopt;
    Int qc;
    if (lead_unit) {
      qc = spec->z_based() ? rl.second * bl.second : rl.second * lead_inv;
    } else if (rl.second % bl.second == 0) {
      qc = rl.second / bl.second;
    } else {
      return std::nullopt;
    }
    std::map<Monomial, Int> t;
    t[rl.first / bl.first] = qc;
    RingElem qterm = RingElem::make(spec, std::move(t));
    quot = quot + qterm;
    rem = rem - qterm * b;
    if (++guard > 100000) return std::nullopt;
  }
  if (quot * b != a) return std::nullopt;
  return quot;
}

std::optional<RingElem> divide_exact(const RingElem& a, const Int& d) {
  if (d == 0) return std::nullopt;
  if (!a.spec()->z_based())
    fail(Errc::UnsupportedCarrier, "divide_exact is only well-defined over Z-based carriers");
  std::map<Monomial, Int> t;
  for (const auto& [m, c] : a.terms()) {
    if (c % d != 0) return std::nullopt;
    t[m] = c / d;
  }
  return RingElem::make(a.spec(), std::move(t));
}

// ---------------------------------------------------------------------------
// spec_id parser
// ---------------------------------------------------------------------------

namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;
  bool eat(char c) {
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  bool eat(const std::string& t) {
    if (s.compare(i, t.size(), t) == 0) {
      i += t.size();
      return true;
    }
    return false;
  }
  char peek() const { return i < s.size() ? s[i] : '\0'; }
  [[noreturn]] void bad(const std::string& why) const {
    fail(Errc::ParseError, why + " at position " + std::to_string(i) + " in '" + s + "'");
  }
  long number() {
    size_t j = i;
    if (peek() == '-') ++j;
    size_t start = j;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == start) bad("expected number");
    long v = std::stol(s.substr(i, j - i));
    i = j;
    return v;
  }
  std::string name() {
    size_t j = i;
    while (j < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
      ++j;
    if (j == i) bad("expected identifier");
    std::string v = s.substr(i, j - i);
    i = j;
    return v;
  }
};

}  // namespace

// Parses a polynomial expression like "u^2-2" or "3*x*y^2+1" over the given
// variables; returns the raw term map.
std::map<Monomial, Int> parse_poly_terms(const std::string& text, const std::vector<std::string>& vars) {
  Cursor c{text};
  std::map<Monomial, Int> terms;
  bool first = true;
  while (c.i < text.size()) {
    Int sign = 1;
    if (c.eat('+')) {
    } else if (c.eat('-')) {
      sign = -1;
    } else if (!first) {
      c.bad("expected '+' or '-'");
    }
    first = false;
    Int coeff = 1;
    Monomial m(vars.size());
    bool any = false;
    bool expect_factor = true;
    while (expect_factor) {
      if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
        size_t j = c.i;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        coeff *= Int(text.substr(c.i, j - c.i));
        c.i = j;
        any = true;
      } else if (std::isalpha(static_cast<unsigned char>(c.peek()))) {
        std::string v = c.name();
        int idx = -1;
        for (size_t k = 0; k < vars.size(); ++k)
          if (vars[k] == v) idx = static_cast<int>(k);
        if (idx < 0) c.bad("unknown variable '" + v + "'");
        unsigned e = 1;
        if (c.eat('^')) e = static_cast<unsigned>(c.number());
        m.e[static_cast<size_t>(idx)] += e;
        any = true;
      } else {
        c.bad("expected coefficient or variable");
      }
      expect_factor = c.eat('*');
    }
    if (!any) c.bad("empty term");
    terms[m] += sign * coeff;
  }
  if (first) fail(Errc::ParseError, "empty polynomial expression");
  return terms;
}

SpecPtr RingSpec::parse(const std::string& id) {
  Cursor c{id};
  SpecPtr base;
  if (c.eat("Z/")) {
    long p = c.number();
    if (!c.eat('^')) c.bad("expected '^'");
    long N = c.number();
    base = integers_mod_pn(p, static_cast<int>(N));
  } else if (c.eat("F_")) {
    base = prime_field(c.number());
  } else if (c.eat("Z")) {
    base = integers();
  } else {
    c.bad("expected base ring");
  }
  if (c.i == id.size()) return base;

  if (c.eat("[[")) {
    std::vector<std::string> vars;
    do vars.push_back(c.name());
    while (c.eat(','));
    if (!c.eat("]]_")) c.bad("expected ']]_'");
    long order = c.number();
    if (c.i != id.size()) c.bad("trailing characters");
    return power_series_trunc(base, vars, static_cast<int>(order));
  }
  if (!c.eat('[')) c.bad("expected '['");
  std::vector<std::string> vars;
  do vars.push_back(c.name());
  while (c.eat(','));
  if (!c.eat(']')) c.bad("expected ']'");
  if (c.i == id.size()) return poly(base, vars);
  if (!c.eat("/(")) c.bad("expected '/('");
  std::vector<Monomial> ideal;
  std::vector<Int> eis;
  while (true) {
    size_t start = c.i;
    int depth = 0;
    while (c.i < id.size() && !((id[c.i] == ',' || id[c.i] == ')') && depth == 0)) ++c.i;
    std::string rel = id.substr(start, c.i - start);
    auto terms = parse_poly_terms(rel, vars);
    if (terms.size() == 1 && terms.begin()->second == 1 && !terms.begin()->first.is_one()) {
      ideal.push_back(terms.begin()->first);
    } else {
      // must be a univariate monic relation in vars[0]
      if (!eis.empty()) fail(Errc::UnsupportedRelationSet, "multiple non-monomial relations");
      unsigned deg = 0;
      for (const auto& [m, cc] : terms) {
        for (size_t j = 1; j < m.e.size(); ++j)
          if (m.e[j] != 0) fail(Errc::UnsupportedRelationSet, "non-monomial relation must be univariate in the first variable");
        deg = std::max(deg, m.e[0]);
      }
      Monomial lead(vars.size());
      lead.e[0] = deg;
      auto it = terms.find(lead);
      if (deg == 0 || it == terms.end() || it->second != 1)
        fail(Errc::UnsupportedRelationSet, "non-monomial relation must be monic");
      eis.assign(deg, 0);
      for (const auto& [m, cc] : terms)
        if (m.e[0] < deg) eis[m.e[0]] = cc;
    }
    if (c.eat(')')) break;
    if (!c.eat(',')) c.bad("expected ',' or ')'");
  }
  if (c.i != id.size()) c.bad("trailing characters");
  if (!eis.empty()) {
    if (!ideal.empty() || vars.size() != 1)
      fail(Errc::UnsupportedRelationSet, "Eisenstein relation must be the only relation on one variable");
    return eisenstein_quotient(base, vars[0], eis);
  }
  return poly_quotient(base, vars, ideal);
}

}  // namespace prismkit
