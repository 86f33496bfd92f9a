#pragma once

#include <vector>

#include "prismkit/ring.hpp"

namespace prismkit {

// Universal structure polynomials of the p-typical Witt ring, generated from
// the ghost recursion over exact integers.
enum class WittOp { Sum, Product, Negation, Frobenius, Delta };

const char* witt_op_name(WittOp op);

// Integer polynomial for component `index` of the operation: lives in
// Z[a0..ak] or Z[a0..ak, b0..bk] (k = index, or index+1 for Frobenius/Delta).
// Memoized per (p, op, index); thread-safe. Generation checks Dwork
// integrality (IntegralityFailure on a remainder, which would be a bug) and
// refuses index > cap (CapExceeded).
RingElem universal_poly(long p, WittOp op, int index, int cap = 6);

// Length-n component vector with the universal ring structure. The prime is
// carried explicitly so that symbolic carriers (Z[a0..]) work too; for
// modular carriers it must match the carrier's own prime.
struct WittVector {
  long p = 0;
  std::vector<RingElem> comps;

  WittVector() = default;
  WittVector(long p_, std::vector<RingElem> c) : p(p_), comps(std::move(c)) {
    if (comps.empty()) fail(Errc::LengthUnderflow, "Witt vector needs length >= 1");
    if (!is_prime(p)) fail(Errc::BadPrecision, "Witt prime must be prime");
    for (const auto& a : comps) require_same_spec(comps[0], a);
    if (!spec()->z_based() && spec()->p() != p)
      fail(Errc::SpecMismatch, "Witt prime differs from the carrier prime");
  }
  int length() const { return static_cast<int>(comps.size()); }
  const SpecPtr& spec() const { return comps.at(0).spec(); }
  bool operator==(const WittVector& o) const { return p == o.p && comps == o.comps; }
  bool operator!=(const WittVector& o) const { return !(*this == o); }
  bool is_zero() const {
    for (const auto& a : comps)
      if (!a.is_zero()) return false;
    return true;
  }
  std::string str() const;
};

WittVector witt_zero(const SpecPtr& spec, long p, int n);
WittVector witt_one(const SpecPtr& spec, long p, int n);
// c * 1 in W_n (binary addition chain through the universal polynomials).
WittVector witt_from_int(const SpecPtr& spec, long p, int n, const Int& c);

WittVector witt_add(const WittVector& x, const WittVector& y);
WittVector witt_sub(const WittVector& x, const WittVector& y);
WittVector witt_mul(const WittVector& x, const WittVector& y);
WittVector witt_neg(const WittVector& x);

WittVector teichmuller(const RingElem& r, long p, int n);
// (a0..a_{n-1}) -> (0, a0, ..., a_{n-2}), same length.
WittVector verschiebung(const WittVector& x);
// V as the length-raising shift W_{n} -> W_{n+1}: (a0..a_{n-1}) -> (0, a0..a_{n-1}).
WittVector verschiebung_up(const WittVector& x);
WittVector witt_pow(const WittVector& x, unsigned long e);
// Drop the last component (length n-1); LengthUnderflow at n = 1.
WittVector restriction(const WittVector& x);
// F: W_n -> W_{n-1}. Over characteristic-p carriers a componentwise p-th
// power fast path is used unless force_universal is set.
WittVector witt_frobenius(const WittVector& x, bool force_universal = false);

std::vector<RingElem> ghost(const WittVector& x);
RingElem ghost_component(const WittVector& x, int m);

struct FromGhostResult {
  WittVector w;
  // digits lost per component (component m is well-defined mod p^{N-m} on
  // modular carriers; all zero over Z-based carriers)
  std::vector<int> losses;
};
// Inverts ghost; NonIntegralGhost if g is not in the ghost image at working
// precision, PrecisionExhausted if a division would use up every digit.
FromGhostResult from_ghost(const std::vector<RingElem>& g, long p);

// Fx = 0 (the G_a^sharp condition W[F]).
bool is_ga_sharp(const WittVector& x);
// x a unit with Fx = 1 (the G_m^sharp condition W*[F]).
bool is_gm_sharp(const WittVector& x);

// Every element of W_n(S) for a finite carrier S, deterministic order.
std::vector<WittVector> enumerate_witt(const SpecPtr& spec, long p, int n,
                                       size_t budget = 1u << 16);

}  // namespace prismkit
