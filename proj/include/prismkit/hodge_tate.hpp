#pragma once

#include "prismkit/delta.hpp"

namespace prismkit {

using Rat = mpq_class;

// ---------------------------------------------------------------------------
// Frobenius-equation torsor
// ---------------------------------------------------------------------------

struct SenSolveInstance {
  SpecPtr R;  // finite F_p-algebra carrier
  long p = 2;
  int n = 2;  // Witt length
  int m = 1;  // solve F x = p^m
  size_t budget = 1u << 16;
};

// Exhaustive solution set of F(x) = p^m in W_n(R), in enumeration order.
std::vector<WittVector> solve_frobenius_equation(const SenSolveInstance& inst);

// ---------------------------------------------------------------------------
// group law a * b = a + b + c a b and its exp/log series
// ---------------------------------------------------------------------------

RingElem star_product(const RingElem& a, const RingElem& b, const RingElem& c);

// monomial c^c_exp x^x_exp y^y_exp over exact rationals
struct QMono {
  unsigned c = 0, x = 0, y = 0;
  bool operator==(const QMono& o) const { return c == o.c && x == o.x && y == o.y; }
  bool operator<(const QMono& o) const {
    if (c != o.c) return c < o.c;
    if (x != o.x) return x < o.x;
    return y < o.y;
  }
};

// Truncated series over Q[c] in x (and y for two-variable identities); the
// truncation bound M caps the total degree in (x, y), never in c.
struct QPoly {
  std::map<QMono, Rat> terms;

  static QPoly zero() { return {}; }
  static QPoly constant(const Rat& r);
  static QPoly var_c();
  static QPoly var_x();
  static QPoly var_y();

  QPoly operator+(const QPoly& o) const;
  QPoly operator-(const QPoly& o) const;
  QPoly operator-() const;
  QPoly mul(const QPoly& o, int M) const;
  QPoly pow(unsigned e, int M) const;
  // substitute x := arg, truncating at (x, y)-degree M
  QPoly subst_x(const QPoly& arg, int M) const;
  bool operator==(const QPoly& o) const { return terms == o.terms; }
  Rat coeff(unsigned c, unsigned x, unsigned y = 0) const;
  std::string str() const;

  void prune();  // drop zero coefficients
};

// exp_G = sum_{n=1..M} c^{n-1} x^n / n!
QPoly exp_G(int M);
// log_G = sum_{n=1..M} (-c)^{n-1} x^n / n
QPoly log_G(int M);
// a + b + c a b on series
QPoly qp_star(const QPoly& a, const QPoly& b, int M);

// ---------------------------------------------------------------------------
// integrality profile of the log/exp coefficients at Eisenstein data
// ---------------------------------------------------------------------------

struct IntegralityTerm {
  int n = 1;
  Rat v_exp_coeff;  // v(E'(pi)^{n-1} / n!)
  Rat v_log_coeff;  // v(E'(pi)^{n-1} / n)
  bool exp_integral = false;
  bool log_integral = false;
};

struct IntegralityReport {
  long p = 2;
  int e = 2;             // deg E
  Rat v_eprime;          // v(E'(pi)), normalized v(p) = 1
  bool boundary = false; // v(E') == 1/(p-1): verdicts reported, not asserted
  std::vector<IntegralityTerm> terms;
};

// eis = c0..c_{e-1} of monic Eisenstein E over Z_p; evaluation at pi with
// v(pi) = 1/e. UnramifiedInput when e = 1 (E' is a unit there).
IntegralityReport integrality_profile(const std::vector<Int>& eis, long p, int M);

// ---------------------------------------------------------------------------
// crystalline prismatic logarithm
// ---------------------------------------------------------------------------

struct PrismaticLog {
  RingElem value;  // log(1 + p z)/p mod p^{N-lost}
  int lost = 0;    // division loss (0: every series term is p-integral)
};

// Partial sum sum_{k=1..K} (-1)^{k-1} p^{k-1} z^k / k for scalar z mod p^N;
// InsufficientTerms unless term K+1 already has valuation >= N.
PrismaticLog prismatic_log(const RingElem& z, int K);

}  // namespace prismkit
