#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "pindex/errors.hpp"

namespace pindex {

using Integer = mpz_class;
using Rational = mpq_class;

/// Integrality mode: plain integers, or the localization Z_(ell).
class Locality {
public:
  constexpr Locality() = default;

  static constexpr Locality global() { return Locality{}; }
  static Locality local_at(std::uint64_t ell);

  bool is_global() const { return ell_ == 0; }
  std::uint64_t ell() const { return ell_; }

  friend bool operator==(const Locality&, const Locality&) = default;

private:
  explicit constexpr Locality(std::uint64_t ell) : ell_(ell) {}
  std::uint64_t ell_ = 0;
};

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  Integer z(static_cast<unsigned long>(p));
  return mpz_probab_prime_p(z.get_mpz_t(), 40) != 0;
}

inline Locality Locality::local_at(std::uint64_t ell) {
  if (!is_prime(ell)) throw InputError("locality prime must be prime, got " + std::to_string(ell));
  return Locality(ell);
}

/// ell-adic valuation of a nonzero integer.
inline long valuation(const Integer& z, std::uint64_t ell) {
  if (z == 0) throw InputError("valuation of zero");
  Integer q = abs(z);
  Integer p(static_cast<unsigned long>(ell));
  long v = 0;
  while (mpz_divisible_p(q.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(q.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    ++v;
  }
  return v;
}

/// ell-adic valuation of a nonzero rational.
inline long valuation(const Rational& q, std::uint64_t ell) {
  return valuation(Integer(q.get_num()), ell) - valuation(Integer(q.get_den()), ell);
}

inline bool divides(std::uint64_t ell, const Integer& z) {
  return mpz_divisible_ui_p(z.get_mpz_t(), static_cast<unsigned long>(ell)) != 0;
}

/// Membership in Z (global) or Z_(ell) (local).
inline bool is_integral(const Rational& q, const Locality& loc) {
  if (loc.is_global()) return q.get_den() == 1;
  return !divides(loc.ell(), Integer(q.get_den()));
}

inline Integer binomial(std::uint64_t n, std::uint64_t k) {
  Integer r;
  if (k > n) return Integer(0);
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

/// Binomial with possibly negative top, as used by polynomial expansions.
inline Integer binomial(const Integer& n, std::uint64_t k) {
  Integer r;
  mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(k));
  return r;
}

inline Integer factorial(std::uint64_t n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

/// r (r-1) ... (r-k+1); equals 1 for k = 0.
inline Integer falling_factorial(std::uint64_t r, std::uint64_t k) {
  Integer out(1);
  for (std::uint64_t i = 0; i < k; ++i) {
    if (i > r) return Integer(0);
    out *= Integer(static_cast<unsigned long>(r - i));
  }
  return out;
}

inline Integer power(const Integer& base, std::uint64_t exp) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(exp));
  return r;
}

inline Integer power(std::uint64_t base, std::uint64_t exp) {
  return power(Integer(static_cast<unsigned long>(base)), exp);
}

/// num/den in lowest terms; gmpxx leaves two-argument construction uncanonicalized.
inline Rational ratio(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Rational power with integer (possibly negative) exponent.
inline Rational rational_power(std::uint64_t base, long exp) {
  if (exp >= 0) return Rational(power(base, static_cast<std::uint64_t>(exp)));
  return ratio(Integer(1), power(base, static_cast<std::uint64_t>(-exp)));
}

/// Sign of |a| - |b|.
inline int cmpabs(const Integer& a, const Integer& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

/// Floor of a rational.
inline Integer floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

/// True if n = ell^k for some k >= 0.
inline bool is_power_of(std::uint64_t n, std::uint64_t ell) {
  if (n == 0 || ell < 2) return false;
  while (n % ell == 0) n /= ell;
  return n == 1;
}

/// True if n is p^k for a prime p and k >= 1.
inline bool is_prime_power(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) return is_power_of(n, p);
  }
  return true;
}

/// Exact "num/den" form; the denominator is always written.
inline std::string to_fraction_string(Rational q) {
  q.canonicalize();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Accepts "num/den" or a bare integer. Decimals are rejected.
inline Rational parse_fraction(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return InputError("not an exact fraction: '" + s + "'"); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  auto valid_int = [](const std::string& part) {
    if (part.empty()) return false;
    std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') return false;
    return true;
  };
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+') throw bad();
  if (num[0] == '+') num.erase(0, 1);
  Integer d(den);
  if (d == 0) throw bad();
  return ratio(Integer(num), d);
}

inline std::uint64_t to_u64(const Integer& z) {
  if (z < 0 || mpz_sizeinbase(z.get_mpz_t(), 2) > 63) throw InputError("integer out of 64-bit range: " + z.get_str());
  return static_cast<std::uint64_t>(mpz_get_ui(z.get_mpz_t()));
}

} // namespace pindex
