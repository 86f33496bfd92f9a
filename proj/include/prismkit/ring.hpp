#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "prismkit/errors.hpp"
#include "prismkit/precision.hpp"

namespace prismkit {

using Int = mpz_class;

Int int_pow(const Int& base, unsigned long e);
Int pow_pk(long p, int k);
// p-adic valuation of a nonzero integer (caller guarantees a != 0).
int p_valuation(const Int& a, long p);

// Exponent vector over a spec's variable list, compared in graded-lex order
// (total degree first, then lexicographic by variable index).
struct Monomial {
  std::vector<unsigned> e;

  Monomial() = default;
  explicit Monomial(size_t nvars) : e(nvars, 0) {}

  unsigned total_degree() const {
    unsigned d = 0;
    for (unsigned x : e) d += x;
    return d;
  }
  bool is_one() const { return total_degree() == 0; }
  bool divisible_by(const Monomial& m) const {
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] < m.e[i]) return false;
    return true;
  }
  Monomial operator*(const Monomial& m) const {
    Monomial r = *this;
    for (size_t i = 0; i < e.size(); ++i) r.e[i] += m.e[i];
    return r;
  }
  // quotient, caller guarantees divisibility
  Monomial operator/(const Monomial& m) const {
    Monomial r = *this;
    for (size_t i = 0; i < e.size(); ++i) r.e[i] -= m.e[i];
    return r;
  }
  bool operator==(const Monomial& m) const { return e == m.e; }
  bool operator<(const Monomial& m) const {
    unsigned da = total_degree(), db = m.total_degree();
    if (da != db) return da < db;
    return e > m.e;  // higher leading exponent = later in graded-lex
  }
};

class RingSpec;
using SpecPtr = std::shared_ptr<const RingSpec>;

// A presented coefficient ring from the closed catalog: Z, Z/p^N, F_p, and
// polynomial carriers over those with monomial-ideal or single monic
// (Eisenstein-shaped) relations. Every element has a unique normal form.
class RingSpec : public std::enable_shared_from_this<RingSpec> {
 public:
  enum class Kind { Integers, IntegersModPN, PrimeField, PolyQuotient, PowerSeriesTrunc };

  static SpecPtr integers();
  static SpecPtr integers_mod_pn(long p, int N);
  static SpecPtr prime_field(long p);
  // Free polynomial ring over a scalar base (no relations).
  static SpecPtr poly(const SpecPtr& base, std::vector<std::string> vars);
  static SpecPtr poly_quotient(const SpecPtr& base, std::vector<std::string> vars,
                               std::vector<Monomial> monomial_ideal);
  static SpecPtr power_series_trunc(const SpecPtr& base, std::vector<std::string> vars, int order);
  // Quotient base[var]/(E) for monic E; checks the Eisenstein shape
  // (constant term p*unit, lower coefficients divisible by p).
  static SpecPtr eisenstein_quotient(const SpecPtr& base, const std::string& var,
                                     std::vector<Int> monic_coeffs,
                                     Errc on_bad_shape = Errc::UnsupportedRelationSet);

  Kind kind() const { return kind_; }
  long p() const { return p_; }
  int padic_digits() const { return padic_digits_; }
  const Int& modulus() const { return modulus_; }  // 0 for Z-based carriers
  bool z_based() const { return modulus_ == 0; }
  const std::vector<std::string>& vars() const { return vars_; }
  size_t nvars() const { return vars_.size(); }
  const std::vector<Monomial>& monomial_ideal() const { return monomial_ideal_; }
  const std::vector<Int>& eisenstein() const { return eisenstein_; }
  bool has_eisenstein() const { return !eisenstein_.empty(); }
  int series_order() const { return series_order_; }

  // Carrier is local with residue field F_p: modular base and every variable
  // (topologically) nilpotent.
  bool is_local() const;
  // Characteristic-p carrier (p * 1 == 0).
  bool is_char_p() const { return modulus_ == p_ && p_ != 0; }

  const std::string& id() const { return id_; }
  bool same(const RingSpec& o) const { return id_ == o.id_; }

  int var_index(const std::string& name) const;  // -1 if absent

  // Same relations and base, extra free variables appended.
  SpecPtr with_vars_appended(const std::vector<std::string>& extra) const;
  // Modular carriers only: p^N -> p^(N+extra) / p^(N-k).
  SpecPtr p_adic_lift(int extra_digits) const;
  SpecPtr p_adic_downgrade(int k) const;

  // All monomials in normal form; throws if the basis is infinite or larger
  // than `cap`.
  std::vector<Monomial> monomial_basis(size_t cap = 1u << 16) const;
  bool is_finite() const;
  // |carrier| as an integer, for finite carriers.
  Int cardinality(size_t basis_cap = 1u << 16) const;

  static SpecPtr parse(const std::string& id);

 private:
  RingSpec() = default;
  void finalize();  // computes id_, sanity checks
  std::string render_id() const;

  Kind kind_ = Kind::Integers;
  long p_ = 0;           // 0 for Z
  int padic_digits_ = 0; // 0 for Z
  Int modulus_ = 0;
  std::vector<std::string> vars_;
  std::vector<Monomial> monomial_ideal_;
  std::vector<Int> eisenstein_;  // c0..c_{e-1} of monic E, empty if none
  int series_order_ = 0;
  std::string id_;
};

// Element of a RingSpec in normal form: a finite monomial->coefficient map
// with no reducible monomial and no zero coefficient; equality is map
// equality.
class RingElem {
 public:
  RingElem() = default;
  static RingElem zero(SpecPtr spec) { return RingElem(std::move(spec)); }
  static RingElem one(const SpecPtr& spec) { return constant(spec, 1); }
  static RingElem constant(SpecPtr spec, Int c);
  static RingElem var(SpecPtr spec, size_t idx, unsigned exp = 1, Int coeff = 1);

  const SpecPtr& spec() const { return spec_; }
  const std::map<Monomial, Int>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Int constant_coeff() const;
  unsigned degree() const;

  RingElem operator+(const RingElem& o) const;
  RingElem operator-(const RingElem& o) const;
  RingElem operator-() const;
  RingElem operator*(const RingElem& o) const;
  RingElem operator*(const Int& c) const;
  RingElem pow(unsigned long e) const;
  bool operator==(const RingElem& o) const;
  bool operator!=(const RingElem& o) const { return !(*this == o); }

  bool is_unit() const;   // local carriers only (UnsupportedQuery otherwise)
  RingElem invert() const;

  // b with p^k * b = a; result lives in the p-adically downgraded spec for
  // modular carriers (lost = k) and in the same spec for Z-based ones
  // (lost = 0).
  std::pair<RingElem, int> div_exact_by_p(int k) const;

  std::string str() const;  // canonical human form, graded-lex sorted

  // internal: build from raw terms and normalize
  static RingElem make(SpecPtr spec, std::map<Monomial, Int> raw);

 private:
  explicit RingElem(SpecPtr spec) : spec_(std::move(spec)) {}
  void normalize();

  SpecPtr spec_;
  std::map<Monomial, Int> terms_;
};

// Image of `a` under the homomorphism sending source generator i to
// images[i]; checks that the source relations (and the source modulus) die in
// the target, throws RelationViolated otherwise.
RingElem hom_apply(const RingElem& a, const std::vector<RingElem>& images, const SpecPtr& target);
// Same evaluation without the relation check (for free-source substitutions).
RingElem eval_at(const RingElem& a, const std::vector<RingElem>& images, const SpecPtr& target);

// Every element of a finite carrier, in a deterministic order (coefficients
// in residue order over the graded-lex monomial basis).
std::vector<RingElem> enumerate_elements(const SpecPtr& spec, size_t budget = 1u << 16);

// Exact division a / b in the carrier when the quotient exists (monomial-wise
// long division); nullopt if not exactly divisible.
std::optional<RingElem> div_exact(const RingElem& a, const RingElem& b);

// Coefficientwise exact integer division for Z-based carriers; nullopt if
// some coefficient is not divisible.
std::optional<RingElem> divide_exact(const RingElem& a, const Int& d);

// Parses "u^2-2" / "3*x*y^2+1" over the given variables into a raw term map.
std::map<Monomial, Int> parse_poly_terms(const std::string& text, const std::vector<std::string>& vars);

inline void require_same_spec(const RingElem& a, const RingElem& b) {
  if (!a.spec() || !b.spec() || !a.spec()->same(*b.spec()))
    fail(Errc::SpecMismatch, "operands belong to different ring specs");
}

}  // namespace prismkit
