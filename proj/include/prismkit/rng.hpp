#pragma once

#include <cstdint>

#include "prismkit/ring.hpp"

namespace prismkit {

// SplitMix64: tiny, deterministic, seedable; identical streams on every
// platform, which the reproducibility contract needs.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed = 0x9e3779b97f4a7c15ULL) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  uint64_t below(uint64_t n) { return n ? next() % n : 0; }
};

// Random sparse element: up to max_terms monomials with per-variable exponent
// < exp_bound; coefficients uniform mod p^N (or in [-49, 49] over Z).
inline RingElem random_elem(const SpecPtr& spec, Rng& rng, unsigned max_terms = 4,
                            unsigned exp_bound = 3) {
  std::map<Monomial, Int> t;
  unsigned k = 1 + static_cast<unsigned>(rng.below(max_terms));
  for (unsigned i = 0; i < k; ++i) {
    Monomial m(spec->nvars());
    for (size_t v = 0; v < spec->nvars(); ++v)
      m.e[v] = static_cast<unsigned>(rng.below(exp_bound));
    Int c;
    if (spec->z_based())
      c = static_cast<long>(rng.below(99)) - 49;
    else
      c = Int(std::to_string(rng.next())) % spec->modulus();
    t[m] += c;
  }
  return RingElem::make(spec, std::move(t));
}

}  // namespace prismkit
