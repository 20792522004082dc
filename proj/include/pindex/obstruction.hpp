#pragma once

// Divisibility obstructions for a topologically trivial Brauer class
// α = exp(b/n) on a product of g elliptic curves.
//
// For a rational B-field B = b/n and degree e, the classes
//   p_i(c) = C(e,i) B^i + Σ_{j=1..i} C(e-j, i-j) B^{i-j} c_j,   1 <= i <= min(e, g)
// must be integral for some Hodge classes c_j whenever ind(α) | e. The
// fibral-degree variant replaces the leading coefficient by e·C(r,i) and the
// binomials by C(r-j, i-j). Both conditions are linear in the Hodge
// coordinates of the c_j and are decided by the congruence solver.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pindex/congruence.hpp"
#include "pindex/errors.hpp"
#include "pindex/exterior.hpp"
#include "pindex/rational.hpp"

namespace pindex {

/// (ring, integral B-field b, presented degree n).
class BrauerScenario {
public:
  BrauerScenario() = default;

  BrauerScenario(ProductRing ring, ExteriorClass b, std::uint64_t n, std::optional<int> standard_t = std::nullopt)
      : ring_(std::move(ring)), b_(std::move(b)), n_(n), standard_t_(standard_t) {
    if (n_ < 1) throw InputError("period n must be positive");
    if (b_.g() != ring_.g()) throw InputError("B-field lives in a ring with a different g");
    if (!b_.is_homogeneous(2)) throw InputError("B-field must be homogeneous of degree 2");
    if (!is_integral(b_, ring_.locality())) throw InputError("B-field must be integral under the scenario locality");
    if (!ring_.locality().is_global() && !is_power_of(n_, ring_.locality().ell()))
      throw InputError("local scenario needs n a power of ell=" + std::to_string(ring_.locality().ell()) +
                       ", got n=" + std::to_string(n_));
  }

  /// b = Σ_{i=1..t} x_i ∧ y_{i+1}.
  static BrauerScenario standard(const ProductRing& ring, int t, std::uint64_t n) {
    return BrauerScenario(ring, ring.standard_b(t), n, t);
  }

  const ProductRing& ring() const { return ring_; }
  int g() const { return ring_.g(); }
  const Locality& locality() const { return ring_.locality(); }
  const ExteriorClass& b() const { return b_; }
  std::uint64_t n() const { return n_; }
  const std::optional<int>& standard_t() const { return standard_t_; }

  ExteriorClass B() const { return b_ * ratio(Integer(1), Integer(static_cast<unsigned long>(n_))); }

private:
  ProductRing ring_;
  ExteriorClass b_;
  std::uint64_t n_ = 1;
  std::optional<int> standard_t_;
};

namespace detail {

inline void check_unknowns(const BrauerScenario& sc, std::uint64_t i, const std::vector<ExteriorClass>& c) {
  if (c.size() < i) throw InputError("need at least " + std::to_string(i) + " classes c_j");
  for (std::uint64_t j = 1; j <= i; ++j) {
    const ExteriorClass& cj = c[j - 1];
    if (cj.g() != sc.g()) throw InputError("c_j from a ring with different g");
    if (!cj.is_homogeneous(static_cast<int>(2 * j)))
      throw InputError("c_" + std::to_string(j) + " must be homogeneous of degree " + std::to_string(2 * j));
  }
}

inline std::vector<ExteriorClass> powers_of(const ExteriorClass& B, std::uint64_t m) {
  std::vector<ExteriorClass> out;
  out.push_back(ExteriorClass::scalar(B.g(), Rational(1)));
  for (std::uint64_t k = 1; k <= m; ++k) out.push_back(wedge(out.back(), B));
  return out;
}

/// Generic builder: rows are monomials in degrees 2..2m, columns the Hodge
/// coordinates of c_1..c_m; block (i, j) is coeff(i,j)·B^{i-j}·ω_J and the
/// target in block i is leading(i)·B^i.
template <typename Leading, typename Coeff>
ObstructionSystem build_system(const BrauerScenario& sc, std::uint64_t m, Leading leading, Coeff coeff) {
  const ProductRing& ring = sc.ring();
  const int g = ring.g();
  std::vector<ExteriorClass> Bp = powers_of(sc.B(), m);
  std::vector<HodgeBasis> bases;
  for (std::uint64_t j = 1; j <= m; ++j) bases.push_back(hodge_basis(ring, static_cast<int>(j)));

  ObstructionSystem sys;
  sys.locality = sc.locality();
  std::unordered_map<Monomial, std::size_t> row_of;
  for (std::uint64_t i = 1; i <= m; ++i)
    for (Monomial mono : monomials_of_degree(g, static_cast<int>(2 * i))) {
      row_of.emplace(mono, sys.rows.size());
      sys.rows.push_back(RowLabel{RowLabel::Kind::Monomial, static_cast<int>(2 * i), mono, 0});
    }
  for (std::uint64_t j = 1; j <= m; ++j)
    for (std::size_t k = 0; k < bases[j - 1].size(); ++k) sys.cols.push_back(ColumnLabel{static_cast<int>(j), k});

  const std::size_t n = sys.rows.size();
  sys.A = RatMatrix(n, sys.cols.size());
  sys.t.assign(n, Rational(0));
  for (std::uint64_t i = 1; i <= m; ++i) {
    Rational lead = leading(i);
    if (lead == 0) continue;
    for (const auto& [mono, c] : Bp[i].terms()) sys.t[row_of.at(mono)] += lead * c;
  }
  std::size_t col = 0;
  for (std::uint64_t j = 1; j <= m; ++j) {
    for (const ExteriorClass& omega_J : bases[j - 1].elements) {
      for (std::uint64_t i = j; i <= m; ++i) {
        Integer k = coeff(i, j);
        if (k == 0) continue;
        ExteriorClass term = wedge(Bp[i - j], omega_J);
        for (const auto& [mono, c] : term.terms()) sys.A(row_of.at(mono), col) += Rational(k) * c;
      }
      ++col;
    }
  }
  return sys;
}

} // namespace detail

/// C(e,i) B^i + Σ_{j<=i} C(e-j,i-j) B^{i-j} c_j, with c[j-1] = c_j.
inline ExteriorClass p_polynomial(const BrauerScenario& sc, std::uint64_t e, std::uint64_t i,
                                  const std::vector<ExteriorClass>& c) {
  if (i < 1 || i > std::min<std::uint64_t>(e, static_cast<std::uint64_t>(sc.g())))
    throw InputError("p_i needs 1 <= i <= min(e, g)");
  detail::check_unknowns(sc, i, c);
  std::vector<ExteriorClass> Bp = detail::powers_of(sc.B(), i);
  ExteriorClass out = Bp[i] * Rational(binomial(e, i));
  for (std::uint64_t j = 1; j <= i; ++j) out += wedge(Bp[i - j], c[j - 1]) * Rational(binomial(e - j, i - j));
  return out;
}

/// e·C(r,i) B^i + Σ_{j<=i} C(r-j,i-j) B^{i-j} c_j.
inline ExteriorClass q_polynomial(const BrauerScenario& sc, std::uint64_t r, std::uint64_t e, std::uint64_t i,
                                  const std::vector<ExteriorClass>& c) {
  if (i < 1 || i > std::min<std::uint64_t>(r, static_cast<std::uint64_t>(sc.g())))
    throw InputError("q_i needs 1 <= i <= min(r, g)");
  detail::check_unknowns(sc, i, c);
  std::vector<ExteriorClass> Bp = detail::powers_of(sc.B(), i);
  ExteriorClass out = Bp[i] * Rational(Integer(static_cast<unsigned long>(e)) * binomial(r, i));
  for (std::uint64_t j = 1; j <= i; ++j) out += wedge(Bp[i - j], c[j - 1]) * Rational(binomial(r - j, i - j));
  return out;
}

inline ObstructionSystem build_p_system(const BrauerScenario& sc, std::uint64_t e) {
  if (e < 1) throw InputError("degree e must be positive");
  std::uint64_t m = std::min<std::uint64_t>(e, static_cast<std::uint64_t>(sc.g()));
  return detail::build_system(
      sc, m, [e](std::uint64_t i) { return Rational(binomial(e, i)); },
      [e](std::uint64_t i, std::uint64_t j) { return binomial(e - j, i - j); });
}

/// e = 0 is accepted so the family is linear in e.
inline ObstructionSystem build_q_system(const BrauerScenario& sc, std::uint64_t r, std::uint64_t e) {
  if (r < 1) throw InputError("relative dimension r must be positive");
  std::uint64_t m = std::min<std::uint64_t>(r, static_cast<std::uint64_t>(sc.g()));
  return detail::build_system(
      sc, m, [r, e](std::uint64_t i) { return Rational(Integer(static_cast<unsigned long>(e)) * binomial(r, i)); },
      [r](std::uint64_t i, std::uint64_t j) { return binomial(r - j, i - j); });
}

/// Obstructed certifies ind(α) ∤ e.
inline Verdict divisibility_obstruction(const BrauerScenario& sc, std::uint64_t e) {
  return decide(build_p_system(sc, e));
}

/// Hodge coordinates c_j for a witness vector of a p- or q-system.
inline std::vector<ExteriorClass> witness_classes(const BrauerScenario& sc, const ObstructionSystem& sys,
                                                  const RatVector& witness) {
  int m = 0;
  for (const auto& cl : sys.cols) m = std::max(m, cl.j);
  std::vector<ExteriorClass> c(static_cast<std::size_t>(m), sc.ring().zero());
  std::vector<HodgeBasis> bases;
  for (int j = 1; j <= m; ++j) bases.push_back(hodge_basis(sc.ring(), j));
  for (std::size_t k = 0; k < sys.cols.size(); ++k) {
    const ColumnLabel& cl = sys.cols[k];
    if (witness[k] == 0) continue;
    c[static_cast<std::size_t>(cl.j - 1)] += bases[static_cast<std::size_t>(cl.j - 1)].elements[cl.basis_index] * witness[k];
  }
  return c;
}

enum class SharpnessConclusion { IndexEquals, IndexNotDividing, Inconclusive };

struct SharpnessReport {
  int g = 0, t = 0;
  std::uint64_t n = 0;
  Locality locality;
  Integer upper_bound;        // n^t: ind | n^t by the cyclic-algebra construction
  std::uint64_t e_obstructed; // n^(t-1)
  bool hypothesis = false;    // n ∤ (t-1)!
  bool prime_power = false;
  Verdict lower;              // verdict at e = n^(t-1)
  Verdict upper;              // verdict at e = n^t
  ObstructionSystem lower_system;
  SharpnessConclusion conclusion = SharpnessConclusion::Inconclusive;
  std::optional<Integer> index; // set when ind(α) = n^t is concluded
};

inline const char* to_string(SharpnessConclusion c) {
  switch (c) {
    case SharpnessConclusion::IndexEquals: return "index-equals-upper-bound";
    case SharpnessConclusion::IndexNotDividing: return "index-does-not-divide";
    case SharpnessConclusion::Inconclusive: break;
  }
  return "inconclusive";
}

inline SharpnessReport sharpness_certificate(int g, int t, std::uint64_t n, const Locality& loc) {
  if (g < 2) throw InputError("sharpness needs g >= 2");
  if (t < 1 || t > g - 1) throw InputError("sharpness needs 1 <= t <= g-1");
  if (n < 2) throw InputError("sharpness needs n >= 2");
  BrauerScenario sc = BrauerScenario::standard(ProductRing(g, loc), t, n);
  SharpnessReport rep;
  rep.g = g;
  rep.t = t;
  rep.n = n;
  rep.locality = loc;
  rep.upper_bound = power(n, static_cast<std::uint64_t>(t));
  rep.e_obstructed = to_u64(power(n, static_cast<std::uint64_t>(t - 1)));
  rep.hypothesis = !divides(n, factorial(static_cast<std::uint64_t>(t - 1)));
  rep.prime_power = is_prime_power(n);
  rep.lower_system = build_p_system(sc, rep.e_obstructed);
  rep.lower = decide(rep.lower_system);
  rep.upper = divisibility_obstruction(sc, to_u64(rep.upper_bound));
  if (rep.hypothesis) {
    if (!rep.lower.obstructed())
      throw InternalError("expected an obstruction at e=n^(t-1) since n does not divide (t-1)!");
    if (rep.prime_power) {
      rep.conclusion = SharpnessConclusion::IndexEquals;
      rep.index = rep.upper_bound;
    } else {
      rep.conclusion = SharpnessConclusion::IndexNotDividing;
    }
  }
  return rep;
}

namespace detail {

/// Unknowns c ∈ H^{1,1}(Z), d ∈ H^{2,2}(Z); rows force c and d integral and
/// (target + c_mult·b∧c + d_mult·d) / modulus integral.
inline ObstructionSystem congruence_system(const BrauerScenario& sc, const ExteriorClass& target,
                                           const Rational& c_mult, const Rational& d_mult, const Integer& modulus) {
  const ProductRing& ring = sc.ring();
  HodgeBasis h1 = hodge_basis(ring, 1);
  HodgeBasis h2 = ring.g() >= 2 ? hodge_basis(ring, 2) : HodgeBasis{2, {}, {}};
  ObstructionSystem sys;
  sys.locality = Locality::global();
  for (std::size_t k = 0; k < h1.size(); ++k) sys.cols.push_back(ColumnLabel{1, k});
  for (std::size_t k = 0; k < h2.size(); ++k) sys.cols.push_back(ColumnLabel{2, k});
  const std::size_t h = sys.cols.size();
  for (std::size_t k = 0; k < h; ++k) sys.rows.push_back(RowLabel{RowLabel::Kind::Unknown, 0, 0, k});
  std::unordered_map<Monomial, std::size_t> row_of;
  for (Monomial mono : monomials_of_degree(ring.g(), 4)) {
    row_of.emplace(mono, sys.rows.size());
    sys.rows.push_back(RowLabel{RowLabel::Kind::Monomial, 4, mono, 0});
  }
  sys.A = RatMatrix(sys.rows.size(), h);
  sys.t.assign(sys.rows.size(), Rational(0));
  for (std::size_t k = 0; k < h; ++k) sys.A(k, k) = 1;
  Rational inv(Integer(1), modulus);
  for (const auto& [mono, c] : target.terms()) sys.t[row_of.at(mono)] += c * inv;
  for (std::size_t k = 0; k < h1.size(); ++k) {
    ExteriorClass bc = wedge(sc.b(), h1.elements[k]);
    for (const auto& [mono, c] : bc.terms()) sys.A(row_of.at(mono), k) += c * c_mult * inv;
  }
  for (std::size_t k = 0; k < h2.size(); ++k)
    for (const auto& [mono, c] : h2.elements[k].terms()) sys.A(row_of.at(mono), h1.size() + k) += c * d_mult * inv;
  return sys;
}

} // namespace detail

/// b^2 ≡ 2 b∧c + d (mod 4) with integral Hodge c, d. Unknowns ordered c then d.
inline ObstructionSystem kresch_system(const BrauerScenario& sc) {
  if (sc.n() != 2) throw InputError("Kresch check needs n = 2");
  if (!sc.locality().is_global()) throw InputError("Kresch check is stated for global integrality");
  return detail::congruence_system(sc, power(sc.b(), 2), Rational(-2), Rational(-1), Integer(4));
}

inline Verdict kresch_check(const BrauerScenario& sc) { return decide(kresch_system(sc)); }

/// (n/2) b^2 + b∧c + d ≡ 0 (mod n), threefolds with n even.
inline ObstructionSystem threefold_system(const BrauerScenario& sc) {
  if (sc.g() != 3) throw InputError("threefold check needs g = 3");
  if (sc.n() % 2 != 0) throw InputError("threefold check needs n even");
  if (!sc.locality().is_global()) throw InputError("threefold check is stated for global integrality");
  ExteriorClass target = power(sc.b(), 2) * Rational(static_cast<unsigned long>(sc.n() / 2));
  return detail::congruence_system(sc, target, Rational(1), Rational(1), Integer(static_cast<unsigned long>(sc.n())));
}

inline Verdict threefold_check(const BrauerScenario& sc) { return decide(threefold_system(sc)); }

/// (n-1) b^2 ≡ 2 b∧c + d (mod 2n); Obstructed certifies ind(α) ∤ n.
inline ObstructionSystem sharp_dim3_system(const BrauerScenario& sc) {
  if (sc.g() != 3) throw InputError("sharp dimension-3 check needs g = 3");
  if (!sc.locality().is_global()) throw InputError("sharp dimension-3 check is stated for global integrality");
  ExteriorClass target = power(sc.b(), 2) * Rational(static_cast<unsigned long>(sc.n() - 1));
  return detail::congruence_system(sc, target, Rational(-2), Rational(-1),
                                   Integer(static_cast<unsigned long>(2 * sc.n())));
}

inline Verdict sharp_dim3_check(const BrauerScenario& sc) { return decide(sharp_dim3_system(sc)); }

struct VanishingDegrees {
  Integer lcm_degree; // lcm{n^i·i : 1 <= i <= dim-1}
  Integer obs_degree; // the same bound with exponents corrected prime by prime
};

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline VanishingDegrees vanishing_degree(int dim, std::uint64_t n) {
  if (dim < 2) throw InputError("vanishing degree needs dim >= 2");
  if (n < 1) throw InputError("vanishing degree needs n >= 1");
  VanishingDegrees out{Integer(1), power(n, static_cast<std::uint64_t>(dim - 1))};
  for (int i = 1; i <= dim - 1; ++i)
    out.lcm_degree = lcm(out.lcm_degree, power(n, static_cast<std::uint64_t>(i)) * Integer(i));
  for (std::uint64_t p : prime_factors(n)) {
    long vn = valuation(Integer(static_cast<unsigned long>(n)), p);
    long best = 0;
    bool first = true;
    for (int i = 1; i <= dim - 1; ++i) {
      long v = valuation(Integer(i), p) - static_cast<long>(dim - 1 - i) * vn;
      if (first || v > best) best = v;
      first = false;
    }
    // i = dim-1 contributes v_p(dim-1) >= 0, so the exponent is never negative
    out.obs_degree *= power(p, static_cast<std::uint64_t>(best));
  }
  return out;
}

struct VanishingWitness {
  std::uint64_t e = 0;
  ObstructionSystem system;
  Verdict verdict;
};

/// The explicit zero-until-top witness at e = lcm{n^i·i}.
inline VanishingWitness vanishing_witness(const BrauerScenario& sc) {
  const int g = sc.g();
  VanishingWitness out;
  out.e = to_u64(vanishing_degree(std::max(g, 2), sc.n()).lcm_degree);
  out.system = build_p_system(sc, out.e);
  RatVector w(out.system.num_unknowns());
  if (out.e >= static_cast<std::uint64_t>(g)) {
    // c_g = -C(e,g) B^g, expressed on the single top Hodge class
    ExteriorClass top_class = power(sc.B(), static_cast<std::uint64_t>(g)) * Rational(-binomial(out.e, static_cast<std::uint64_t>(g)));
    HodgeBasis top = hodge_basis(sc.ring(), g);
    Monomial full = top.elements.front().terms().begin()->first;
    Rational coord = top_class.coefficient(full) / top.elements.front().coefficient(full);
    for (std::size_t k = 0; k < out.system.cols.size(); ++k)
      if (out.system.cols[k].j == g) w[k] = coord;
  }
  out.verdict = Solvable{std::move(w)};
  if (!verify_verdict(out.system, out.verdict))
    throw InternalError("explicit vanishing witness failed verification");
  return out;
}

} // namespace pindex
