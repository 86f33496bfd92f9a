#pragma once

#include "prismkit/delta.hpp"

namespace prismkit {

enum class PrismCatalog { Crystalline, BreuilKisin, QDeRham, Perfectoid };

const char* prism_catalog_name(PrismCatalog c);

// An oriented prism (A, (d)) from the catalog: delta-ring carrier plus a
// distinguished orientation element.
struct PrismSpec {
  PrismCatalog catalog;
  DeltaRing A;
  RingElem d;
  Precision prec;
};

struct DistinguishedReport {
  bool distinguished = false;  // ideal membership p in (d, phi(d))
  bool delta_unit = false;     // delta(d) is a unit
  // (a, b) with p = a d + b phi(d), present iff distinguished
  std::optional<std::pair<RingElem, RingElem>> witness;
};

// Decides p in (d, phi(d)) by exact integer linear algebra over the carrier
// basis (plus a valuation cross-check on scalar carriers), reports the
// delta(d)-unit test, and asserts the two verdicts agree for non-unit d.
DistinguishedReport is_distinguished(const DeltaRing& A, const RingElem& d);

// Catalog constructors; each returned spec passes is_distinguished
// (NotDistinguished otherwise).
PrismSpec mk_prism_crystalline(const Precision& prec);
// (Z/p^N[[u]]_M, E(u)) with delta(u) = 0; eis = c0..c_{e-1} of monic E
// (NotEisenstein if the shape fails).
PrismSpec mk_prism_bk(const std::vector<Int>& eis, const Precision& prec);
// (Z/p^N[[t]]_M, [p]_q) with q = 1 + t, phi(q) = q^p.
PrismSpec mk_prism_qdr(const Precision& prec);
// (Z/p^N[t]/(t^K), p + t) with delta(t) = 0.
PrismSpec mk_prism_perfectoid(int K, const Precision& prec);

// The q-analogue [p]_q as an element of Z/p^N[[t]]_M, t = q - 1.
RingElem q_analogue_of_p(const SpecPtr& carrier);

struct HodgeTateQuotient {
  SpecPtr ring;                   // A/(d)
  std::vector<RingElem> images;   // image of each carrier variable
};
HodgeTateQuotient hodge_tate_quotient(const PrismSpec& P);

// ---------------------------------------------------------------------------
// prismatic envelopes
// ---------------------------------------------------------------------------

struct EnvelopeRelation {
  int k = 0, i = 0;     // delta^k (d f_i - x_i)
  RingElem raw;         // expanded relation in the extended carrier
  bool oriented = false;
  int rule_var = -1;    // extended-carrier variable the rule eliminates
  RingElem rule_rhs;    // substitution target (valid iff oriented)
  int cancelled_p_digits = 0;  // scalar p-power content removed (diagnostic)
  RingElem residual;    // relation reduced by all rules (0 when discharged)
};

struct EnvelopePresentation {
  PrismSpec base;
  std::vector<RingElem> xs;
  int depth = 1;
  SpecPtr ext;           // base carrier with f_i, d f_i, ..., d^D f_i appended
  DeltaRing ext_delta;
  std::vector<EnvelopeRelation> relations;
  bool confluence_diagnostic = false;

  RingElem normal_form(const RingElem& a) const;
  // index of delta^j f_i in the extended carrier
  int fvar(int i, int j = 0) const;
};

// Presentation of A{x_1/d, ..., x_r/d} at delta-depth D: relations
// delta^k(d f_i - x_i) = 0 for k <= D, expanded through delta_apply and
// oriented where the leading delta^k f_i coefficient becomes a unit (after
// exact content cancellation by d / phi^j(d) / p, which the prism contract
// justifies); non-orientable relations are kept as unoriented checks.
EnvelopePresentation prismatic_envelope(const PrismSpec& P, const std::vector<RingElem>& xs, int D);

// ---------------------------------------------------------------------------
// functor of points
// ---------------------------------------------------------------------------

// Evaluation of a modular-carrier element in W_n(S) under generator images;
// checks that the carrier relations (and p^N) die in W_n(S).
WittVector witt_hom_apply(const RingElem& a, const std::vector<WittVector>& images,
                          const SpecPtr& target, long p, int n);

struct EnvelopePoints {
  // tuples (h_1..h_r); set A from brute force over h d = x, set B from the
  // presentation relations
  std::vector<std::vector<WittVector>> set_a, set_b;
  bool equal = false;
};

// base_images: image of each base-carrier variable under a delta-map
// A -> W_n(S) (empty for scalar carriers).
EnvelopePoints envelope_points(const EnvelopePresentation& E, const SpecPtr& S, int n,
                               const std::vector<WittVector>& base_images,
                               size_t budget = 4096);

}  // namespace prismkit
