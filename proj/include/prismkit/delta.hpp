#pragma once

#include <optional>

#include "prismkit/witt.hpp"

namespace prismkit {

// Integer coefficients C(p,i)/p of the delta sum-rule correction term.
std::vector<Int> delta_sum_correction(long p);

// A presented carrier with a delta-rule realizing phi(x) = x^p + p delta(x).
// The rule is a generator table (delta of each carrier variable, or "not
// available" for top-depth generators of a free presentation); delta on
// constants is forced: delta(c) = (c - c^p)/p via the canonical integer lift.
class DeltaRing {
 public:
  static DeltaRing generator_table(SpecPtr carrier, long p,
                                   std::vector<std::optional<RingElem>> delta_of_gen);
  // Truncated free delta-ring Z{x_1..x_k} at depth D: polynomial carrier on
  // the symbols delta^j(x_i), j <= D.
  static DeltaRing free_delta_ring(int k, int D, const Precision& prec);

  const SpecPtr& carrier() const { return carrier_; }
  long p() const { return p_; }
  int free_vars() const { return free_vars_; }
  int depth() const { return depth_; }

  // delta^j(x_i) as a carrier element (free presentations).
  RingElem gen(int i, int j = 0) const;

  const std::optional<RingElem>& delta_of(size_t v) const { return delta_of_gen_.at(v); }
  // Same carrier with every missing top-depth delta closed off as 0 (used by
  // the adjunction lift; base-generator images do not depend on the choice).
  DeltaRing with_zero_closure() const;

  RingElem delta(const RingElem& a) const;
  RingElem phi(const RingElem& a) const;  // a^p + p delta(a)
  RingElem phi_pow(const RingElem& a, int m) const;

  Int delta_const(const Int& c) const;

  // Spot-checks delta(1) = 0 and the sum/product identities plus phi being a
  // homomorphism on `samples` seeded random pairs; on Z/p^N carriers the
  // comparison is modulo p^{N-1} (the constant rule costs one digit).
  void validate(uint64_t seed = 1, int samples = 100) const;

 private:
  DeltaRing() = default;
  RingElem delta_term(const Monomial& m, const Int& c) const;
  RingElem delta_monomial(const Monomial& m) const;

  SpecPtr carrier_;
  long p_ = 2;
  std::vector<std::optional<RingElem>> delta_of_gen_;
  int free_vars_ = 0;  // 0 when not a free presentation
  int depth_ = 0;
};

// a == b up to p^k * carrier (coefficientwise divisibility of the difference).
bool congruent_mod_pk(const RingElem& a, const RingElem& b, int k);

// The cofree delta-structure on W_n(R): the unique delta with phi_W = F,
// computed through the universal Delta polynomials (works over any carrier,
// no precision loss). Result has length n-1.
WittVector delta_on_witt(const WittVector& x);
// Ghost-route computation (from_ghost of (ghost_m(Fx) - ghost_m(x)^p)/p);
// p-torsion-free (Z-based) carriers only. Cross-check for delta_on_witt.
WittVector delta_on_witt_ghost(const WittVector& x);

// The adjunction lift of a ring map f: A -> S (A a delta-ring with Z-based
// carrier) to the delta-map A -> W_n(S): generator a goes to from_ghost of
// (f(a), f(phi a), ..., f(phi^{n-1} a)).
struct DeltaLiftHom {
  long p = 2;
  int n = 1;
  SpecPtr target;
  std::vector<WittVector> gen_images;
  WittVector apply(const RingElem& a) const;
};
// `target` is only needed when the carrier has no generators (e.g. A = Z).
DeltaLiftHom delta_lift_hom(const DeltaRing& A, const std::vector<RingElem>& f, int n,
                            SpecPtr target = nullptr);

// Evaluate a polynomial over the Witt ring W_n(S) with the given images of
// the source variables (source must be Z-based).
WittVector witt_eval(const RingElem& a, const std::vector<WittVector>& images, long p,
                     const SpecPtr& target, int n);

}  // namespace prismkit
