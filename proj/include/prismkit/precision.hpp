#pragma once

#include <cstdint>

#include "prismkit/errors.hpp"

namespace prismkit {

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Bundle of truncation parameters shared by every computation: the prime p,
// the number of p-adic digits carried (N), the Witt length (n), the delta
// depth (D) available in free presentations, and the series order (M) at
// which power-series carriers truncate.
struct Precision {
  long p = 2;
  int padic_digits = 4;
  int witt_length = 3;
  int delta_depth = 2;
  int series_order = 8;

  Precision() = default;
  Precision(long p_, int N, int n, int D, int M)
      : p(p_), padic_digits(N), witt_length(n), delta_depth(D), series_order(M) {
    validate();
  }

  void validate() const {
    if (!is_prime(p)) fail(Errc::BadPrecision, "p must be prime");
    if (padic_digits < 1 || witt_length < 1 || delta_depth < 1 || series_order < 1)
      fail(Errc::BadPrecision, "N, n, D, M must all be >= 1");
  }
};

}  // namespace prismkit
