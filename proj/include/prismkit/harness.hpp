#pragma once

#include <json.hpp>

#include "prismkit/hodge_tate.hpp"
#include "prismkit/prism.hpp"

namespace prismkit {

struct CheckReport {
  std::string name;
  std::string instance;
  bool pass = false;
  std::string witness;     // counterexample on fail, confirming data on pass
  double runtime_ms = 0;   // informational only, excluded from canonical JSON
};

// Canonical serialization; deterministic and byte-identical across runs
// (runtime deliberately omitted).
nlohmann::ordered_json report_to_json(const CheckReport& r);
std::string report_line(const CheckReport& r);  // canonical JSON line

// W_n(J) is square-zero when J is: replays V^i[a] V^j[b] = 0 and exhausts
// products of Witt vectors with all components in J.
CheckReport check_witt_square_zero(const SpecPtr& R, const std::vector<RingElem>& j_gens,
                                   int n, size_t budget = 1u << 16);
// V^n(a) V^n(b) has its first n+1 components zero, computed in W_{n+2}(R).
CheckReport check_kernel_nilpotent(const SpecPtr& R, int n, uint64_t seed = 1,
                                   int samples = 100, size_t budget = 1u << 12);
// p^2 = V(u^{-1}) V(u), replaying x = V(u^{-1}), F x = p u^{-1}.
CheckReport check_p_squared_hodge_tate(const WittVector& u);
// Res(lift(f)) = f and delta-equivariance for sampled assignments from the
// depth-D free delta-ring on k generators into S.
CheckReport check_adjunction_roundtrip(int k, int D, long p, const SpecPtr& S, int n,
                                       uint64_t seed = 1, int samples = 25);

// multiplicative inverse in W_n (unit iff the 0th component is a unit);
// NotAUnit otherwise
WittVector witt_invert(const WittVector& u);

struct HarnessConfig {
  uint64_t seed = 1;
  size_t budget = 1u << 16;
  // When set, the deliberately corrupted fixture is reported as a first-class
  // (failing) check so the aggregate exit status demonstrates failure plumbing.
  bool corrupt_fixture = false;
};

std::vector<std::string> harness_check_names(const HarnessConfig& cfg = {});
// Every registered check, ordered by name; failures are data, not errors.
std::vector<CheckReport> run_all(const HarnessConfig& cfg = {});
// Checks whose name equals `name` or starts with "name/".
std::vector<CheckReport> run_named(const std::string& name, const HarnessConfig& cfg = {});

}  // namespace prismkit
