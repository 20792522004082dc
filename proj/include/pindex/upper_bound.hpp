#pragma once

// Conditional period-index exponent: ind(α) | per(α)^e with
// e = ceil(N + log2(d·C)). Exact integer arithmetic throughout.

#include <cstdint>
#include <map>
#include <vector>

#include "pindex/errors.hpp"
#include "pindex/rational.hpp"

namespace pindex {

struct UpperBoundInputs {
  int dim = 2;
  Integer h2tors{1}, h3tors{1}, denom_lcm{1};
  std::vector<Integer> degrees;

  void validate() const {
    if (dim < 2) throw InputError("dimX must be at least 2");
    if (h2tors < 1 || h3tors < 1 || denom_lcm < 1) throw InputError("torsion orders and denominators must be positive");
    if (degrees.empty()) throw InputError("degrees must be nonempty");
    for (const auto& d : degrees)
      if (d < 1) throw InputError("degrees must be positive");
  }
};

/// p^(r-1) - 1.
inline Integer matzri_exponent(std::uint64_t r, std::uint64_t p) {
  if (r < 1) throw InputError("r must be positive");
  if (!is_prime(p)) throw InputError("p must be prime");
  return power(p, r - 1) - 1;
}

struct SurfaceBound {
  Integer C; // (Π degrees)!
  Integer N; // Σ degrees
};

inline SurfaceBound surface_bound(const std::vector<Integer>& degrees) {
  if (degrees.empty()) throw InputError("degrees must be nonempty");
  Integer prod(1), sum(0);
  for (const auto& d : degrees) {
    if (d < 1) throw InputError("degrees must be positive");
    prod *= d;
    sum += d;
  }
  return {factorial(to_u64(prod)), sum};
}

inline Integer largest_prime_factor(Integer m) {
  if (m < 2) return Integer(1);
  Integer best(1), p(2);
  while (p * p <= m) {
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
      best = p;
      m /= p;
    }
    p += 1;
  }
  return m > 1 ? m : best;
}

/// ceil(log2 x) for x >= 1.
inline std::uint64_t ceil_log2(const Integer& x) {
  if (x < 1) throw InputError("ceil_log2 needs x >= 1");
  std::uint64_t bits = mpz_sizeinbase(x.get_mpz_t(), 2);
  bool pow2 = mpz_scan1(x.get_mpz_t(), 0) == bits - 1;
  return pow2 ? bits - 1 : bits;
}

struct CycleExponent {
  Integer m, p_max, d, C, N, e;
};

inline CycleExponent cycle_exponent_details(const UpperBoundInputs& in) {
  in.validate();
  CycleExponent out;
  out.m = in.denom_lcm * in.h2tors * in.h3tors;
  out.p_max = largest_prime_factor(out.m);
  if (out.m == 1) {
    out.d = 1;
  } else {
    Integer exp = power(out.p_max, static_cast<std::uint64_t>(in.dim - 1)) - 1;
    out.d = power(out.m, to_u64(exp));
  }
  SurfaceBound sb = surface_bound(in.degrees);
  out.C = sb.C;
  out.N = sb.N;
  out.e = out.N + Integer(static_cast<unsigned long>(ceil_log2(out.d * out.C)));
  return out;
}

inline Integer cycle_exponent(const UpperBoundInputs& in) { return cycle_exponent_details(in).e; }

/// One exponent valid for every p-primary part.
inline Integer combine_prime_exponents(const std::map<std::uint64_t, Integer>& per_prime) {
  if (per_prime.empty()) throw InputError("no prime exponents to combine");
  Integer best = per_prime.begin()->second;
  for (const auto& [p, e] : per_prime)
    if (e > best) best = e;
  return best;
}

} // namespace pindex
