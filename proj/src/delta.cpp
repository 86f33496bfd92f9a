#include "prismkit/delta.hpp"

#include "prismkit/rng.hpp"

namespace prismkit {

std::vector<Int> delta_sum_correction(long p) {
  std::vector<Int> K;
  for (long i = 1; i < p; ++i) {
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(i));
    K.push_back(b / p);  // C(p,i) is divisible by p for 0 < i < p
  }
  return K;
}

// Reinterpret an element in a spec with the same variables but different
// modulus (used for p-adic lifting/reduction of images).
static RingElem reinterpret_in(const RingElem& a, const SpecPtr& to) {
  std::map<Monomial, Int> t = a.terms();
  return RingElem::make(to, std::move(t));
}

// ---------------------------------------------------------------------------
// DeltaRing
// ---------------------------------------------------------------------------

DeltaRing DeltaRing::generator_table(SpecPtr carrier, long p,
                                     std::vector<std::optional<RingElem>> delta_of_gen) {
  if (!is_prime(p)) fail(Errc::BadPrecision, "p must be prime");
  if (!carrier->z_based() && carrier->p() != p)
    fail(Errc::SpecMismatch, "delta prime differs from carrier prime");
  if (delta_of_gen.size() != carrier->nvars())
    fail(Errc::SpecMismatch, "generator table arity mismatch");
  for (const auto& d : delta_of_gen)
    if (d && !d->spec()->same(*carrier)) fail(Errc::SpecMismatch, "delta value outside carrier");
  DeltaRing A;
  A.carrier_ = std::move(carrier);
  A.p_ = p;
  A.delta_of_gen_ = std::move(delta_of_gen);
  return A;
}

static std::string free_gen_name(int i, int j) {
  std::string base = "x" + std::to_string(i + 1);
  if (j == 0) return base;
  if (j == 1) return "d" + base;
  return "d" + std::to_string(j) + base;
}

DeltaRing DeltaRing::free_delta_ring(int k, int D, const Precision& prec) {
  if (k < 1 || D < 1) fail(Errc::BadPrecision, "free delta-ring needs k >= 1, D >= 1");
  prec.validate();
  std::vector<std::string> names;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j <= D; ++j) names.push_back(free_gen_name(i, j));
  SpecPtr carrier = RingSpec::poly(RingSpec::integers(), names);
  std::vector<std::optional<RingElem>> table;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j <= D; ++j) {
      if (j < D)
        table.emplace_back(RingElem::var(carrier, static_cast<size_t>(i * (D + 1) + j + 1)));
      else
        table.emplace_back(std::nullopt);
    }
  DeltaRing A = generator_table(std::move(carrier), prec.p, std::move(table));
  A.free_vars_ = k;
  A.depth_ = D;
  return A;
}

DeltaRing DeltaRing::with_zero_closure() const {
  DeltaRing A = *this;
  for (auto& d : A.delta_of_gen_)
    if (!d) d = RingElem::zero(carrier_);
  return A;
}

RingElem DeltaRing::gen(int i, int j) const {
  if (free_vars_ == 0) fail(Errc::UnsupportedQuery, "not a free presentation");
  if (i < 0 || i >= free_vars_) fail(Errc::UnsupportedQuery, "generator index out of range");
  if (j < 0 || j > depth_)
    fail(Errc::DepthExceeded, "delta power " + std::to_string(j) + " exceeds depth " +
                                  std::to_string(depth_));
  return RingElem::var(carrier_, static_cast<size_t>(i * (depth_ + 1) + j));
}

Int DeltaRing::delta_const(const Int& c) const {
  return (c - int_pow(c, static_cast<unsigned long>(p_))) / p_;
}

RingElem DeltaRing::delta_monomial(const Monomial& m) const {
  // fold the variable-power factors through the product rule, tracking
  // (value, delta(value))
  RingElem val = RingElem::one(carrier_);
  RingElem dval = RingElem::zero(carrier_);
  const unsigned long up = static_cast<unsigned long>(p_);
  for (size_t v = 0; v < m.e.size(); ++v) {
    if (m.e[v] == 0) continue;
    if (!delta_of_gen_[v])
      fail(Errc::DepthExceeded,
           "delta of generator '" + carrier_->vars()[v] + "' is not available");
    const RingElem x = RingElem::var(carrier_, v);
    const RingElem& dx = *delta_of_gen_[v];
    // delta of x^e, iteratively
    RingElem f = x;
    RingElem df = dx;
    for (unsigned i = 1; i < m.e[v]; ++i) {
      RingElem nf = f * x;
      df = f.pow(up) * dx + x.pow(up) * df + df * dx * Int(p_);
      f = nf;
    }
    RingElem ndval = val.pow(up) * df + f.pow(up) * dval + dval * df * Int(p_);
    val = val * f;
    dval = ndval;
  }
  return dval;
}

RingElem DeltaRing::delta_term(const Monomial& m, const Int& c) const {
  const unsigned long up = static_cast<unsigned long>(p_);
  RingElem dc = RingElem::constant(carrier_, delta_const(c));
  if (m.is_one()) return dc;
  RingElem me = RingElem::make(carrier_, {{m, Int(1)}});
  RingElem dm = delta_monomial(m);
  return dm * int_pow(c, up) + me.pow(up) * dc + dc * dm * Int(p_);
}

RingElem DeltaRing::delta(const RingElem& a) const {
  if (!a.spec()->same(*carrier_)) fail(Errc::SpecMismatch, "element outside the delta carrier");
  const auto K = delta_sum_correction(p_);
  const unsigned long up = static_cast<unsigned long>(p_);
  RingElem s = RingElem::zero(carrier_);
  RingElem ds = RingElem::zero(carrier_);
  bool first = true;
  for (const auto& [m, c] : a.terms()) {
    RingElem t = RingElem::make(carrier_, {{m, c}});
    RingElem dt = delta_term(m, c);
    if (first) {
      s = t;
      ds = dt;
      first = false;
      continue;
    }
    RingElem corr = RingElem::zero(carrier_);
    for (long i = 1; i < p_; ++i)
      corr = corr + s.pow(static_cast<unsigned long>(i)) * t.pow(up - static_cast<unsigned long>(i)) *
                        K[static_cast<size_t>(i - 1)];
    ds = ds + dt - corr;
    s = s + t;
  }
  return ds;
}

RingElem DeltaRing::phi(const RingElem& a) const {
  return a.pow(static_cast<unsigned long>(p_)) + delta(a) * Int(p_);
}

RingElem DeltaRing::phi_pow(const RingElem& a, int m) const {
  RingElem out = a;
  for (int i = 0; i < m; ++i) out = phi(out);
  return out;
}

bool congruent_mod_pk(const RingElem& a, const RingElem& b, int k) {
  require_same_spec(a, b);
  if (a.spec()->z_based() || k <= 0) return a == b;
  const Int pk = pow_pk(a.spec()->p(), k);
  const RingElem diff = a - b;
  for (const auto& [m, c] : diff.terms())
    if (c % pk != 0) return false;
  return true;
}

void DeltaRing::validate(uint64_t seed, int samples) const {
  if (!delta(RingElem::one(carrier_)).is_zero())
    fail(Errc::RelationViolated, "delta(1) != 0");
  const int digits = carrier_->z_based() ? 0 : carrier_->padic_digits() - 1;
  const auto K = delta_sum_correction(p_);
  const unsigned long up = static_cast<unsigned long>(p_);
  Rng rng(seed);
  for (int it = 0; it < samples; ++it) {
    RingElem x = random_elem(carrier_, rng, 3, 2);
    RingElem y = random_elem(carrier_, rng, 3, 2);
    RingElem corr = RingElem::zero(carrier_);
    for (long i = 1; i < p_; ++i)
      corr = corr + x.pow(static_cast<unsigned long>(i)) * y.pow(up - static_cast<unsigned long>(i)) *
                        K[static_cast<size_t>(i - 1)];
    bool sum_ok = false, prod_ok = false, hom_ok = false;
    try {
      sum_ok = congruent_mod_pk(delta(x + y), delta(x) + delta(y) - corr, digits);
      prod_ok = congruent_mod_pk(
          delta(x * y), x.pow(up) * delta(y) + y.pow(up) * delta(x) + delta(x) * delta(y) * Int(p_),
          digits);
      hom_ok = congruent_mod_pk(phi(x * y), phi(x) * phi(y), digits) &&
               congruent_mod_pk(phi(x + y), phi(x) + phi(y), digits);
    } catch (const Error& e) {
      if (e.code() == Errc::DepthExceeded) continue;  // sampled past the free depth
      throw;
    }
    if (!sum_ok) fail(Errc::RelationViolated, "delta sum identity fails at " + x.str() + ", " + y.str());
    if (!prod_ok)
      fail(Errc::RelationViolated, "delta product identity fails at " + x.str() + ", " + y.str());
    if (!hom_ok) fail(Errc::RelationViolated, "phi is not a homomorphism at " + x.str() + ", " + y.str());
  }
}

// ---------------------------------------------------------------------------
// cofree delta on Witt vectors
// ---------------------------------------------------------------------------

WittVector delta_on_witt(const WittVector& x) {
  if (x.length() < 2) fail(Errc::LengthUnderflow, "delta_on_witt needs length >= 2");
  std::vector<RingElem> out;
  for (int m = 0; m + 1 < x.length(); ++m) {
    auto poly = universal_poly(x.p, WittOp::Delta, m);
    std::vector<RingElem> images(x.comps.begin(), x.comps.begin() + m + 2);
    out.push_back(hom_apply(poly, images, x.spec()));
  }
  return WittVector(x.p, std::move(out));
}

WittVector delta_on_witt_ghost(const WittVector& x) {
  if (x.length() < 2) fail(Errc::LengthUnderflow, "delta_on_witt needs length >= 2");
  if (!x.spec()->z_based())
    fail(Errc::UnsupportedCarrier, "ghost-route delta needs a p-torsion-free carrier");
  std::vector<RingElem> g;
  for (int m = 0; m + 1 < x.length(); ++m) {
    auto num = ghost_component(x, m + 1) -
               ghost_component(x, m).pow(static_cast<unsigned long>(x.p));
    auto q = divide_exact(num, x.p);
    if (!q) fail(Errc::NonIntegralGhost, "phi-F ghost difference not divisible by p");
    g.push_back(*q);
  }
  return from_ghost(g, x.p).w;
}

// ---------------------------------------------------------------------------
// adjunction lift
// ---------------------------------------------------------------------------

WittVector witt_eval(const RingElem& a, const std::vector<WittVector>& images, long p,
                     const SpecPtr& target, int n) {
  if (images.size() != a.spec()->nvars())
    fail(Errc::SpecMismatch, "witt_eval arity mismatch");
  std::vector<std::map<unsigned, WittVector>> cache(images.size());
  WittVector acc = witt_zero(target, p, n);
  for (const auto& [m, c] : a.terms()) {
    WittVector term = witt_from_int(target, p, n, c);
    for (size_t i = 0; i < images.size(); ++i) {
      if (m.e[i] == 0) continue;
      auto it = cache[i].find(m.e[i]);
      if (it == cache[i].end())
        it = cache[i].emplace(m.e[i], witt_pow(images[i], m.e[i])).first;
      term = witt_mul(term, it->second);
    }
    acc = witt_add(acc, term);
  }
  return acc;
}

WittVector DeltaLiftHom::apply(const RingElem& a) const {
  return witt_eval(a, gen_images, p, target, n);
}

DeltaLiftHom delta_lift_hom(const DeltaRing& A, const std::vector<RingElem>& f, int n,
                            SpecPtr target) {
  if (!A.carrier()->z_based())
    fail(Errc::UnsupportedCarrier, "adjunction lift implemented for Z-based delta carriers");
  if (n < 1) fail(Errc::BadPrecision, "Witt length must be >= 1");
  if (f.size() != A.carrier()->nvars()) fail(Errc::SpecMismatch, "assignment arity mismatch");
  if (A.free_vars() > 0 && A.depth() < n - 1)
    fail(Errc::DepthExceeded, "lift to length " + std::to_string(n) + " needs delta-depth >= " +
                                  std::to_string(n - 1));
  const SpecPtr S = f.empty() ? target : f[0].spec();
  if (!S) fail(Errc::SpecMismatch, "no target spec available");
  for (const auto& e : f) require_same_spec(f[0], e);
  const long p = A.p();

  // Work at n-1 extra p-adic digits so every ghost division stays exact at
  // the original precision.
  SpecPtr Sw = S->z_based() ? S : S->p_adic_lift(n - 1);
  std::vector<RingElem> fw;
  for (const auto& e : f) fw.push_back(S->z_based() ? e : reinterpret_in(e, Sw));

  // Close off any missing top-depth deltas as 0; generators whose phi-orbit
  // stays inside the declared depth are unaffected by the choice.
  const DeltaRing Ac = A.with_zero_closure();

  DeltaLiftHom out;
  out.p = p;
  out.n = n;
  out.target = S;
  for (size_t v = 0; v < A.carrier()->nvars(); ++v) {
    std::vector<RingElem> g;
    RingElem cur = RingElem::var(A.carrier(), v);
    for (int m = 0; m < n; ++m) {
      g.push_back(eval_at(cur, fw, Sw));
      if (m + 1 < n) cur = Ac.phi(cur);
    }
    auto r = from_ghost(g, p);
    std::vector<RingElem> comps;
    for (auto& ce : r.w.comps) comps.push_back(S->z_based() ? ce : reinterpret_in(ce, S));
    out.gen_images.emplace_back(p, std::move(comps));
  }
  return out;
}

}  // namespace prismkit
