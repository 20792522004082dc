#pragma once

// Exact decision of: is there a rational vector c with A·c + t in Z^N
// (or in Z_(ell)^N)?
//
// Criterion. Let V = A·Q^h. The affine condition asks whether t ∈ V + Z^N.
// The quotient Q^N / V is a Q-vector space and the image of Z^N in it is a
// free subgroup of full rank, so t ∈ V + Z^N iff the image of t lies in that
// lattice, iff φ·t ∈ Z for every φ in the dual lattice. The dual lattice is
// the set of integer functionals vanishing on V, i.e. the saturated integer
// left kernel K = {φ ∈ Z^N : φ·A = 0}. Over Z_(ell) the same K works since
// localization commutes with taking kernels; only the test on φ·t changes.
//
// Computation. Scale the columns of A to an integer matrix A' with the same
// column span, and row-reduce: U·A' = H with U unimodular and H echelon of
// rank r. The rows r..N-1 of U form a Z-basis of K. Put s = U·t.
//   * If some s_k (k >= r) is non-integral, row k of U is a certificate.
//   * Otherwise solve the top r rows of H·c' = floor(s) - s and set
//     c = D·c' (D the column scaling). Then A·c + t = U^{-1}(integral).
// Both outcomes are re-checked by verify_verdict using plain arithmetic.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pindex/exterior.hpp"
#include "pindex/lattice.hpp"
#include "pindex/matrix.hpp"
#include "pindex/rational.hpp"

namespace pindex {

struct RowLabel {
  enum class Kind { Monomial, Unknown };
  Kind kind = Kind::Monomial;
  int degree = 0;         // cohomological degree of the monomial row
  Monomial monomial = 0;
  std::size_t unknown = 0; // for Unknown rows: the constrained column
};

struct ColumnLabel {
  int j = 0;                   // Hodge degree of the unknown (c_j), or a family tag
  std::size_t basis_index = 0; // index into hodge_basis(ring, j)
};

/// Linearized integrality problem A·c + t ∈ Lattice(locality).
struct ObstructionSystem {
  RatMatrix A;
  RatVector t;
  Locality locality;
  std::vector<RowLabel> rows;
  std::vector<ColumnLabel> cols;

  std::size_t num_rows() const { return t.size(); }
  std::size_t num_unknowns() const { return A.cols(); }

  void validate() const {
    if (A.rows() != t.size() && !(A.rows() == 0 && A.cols() == 0))
      throw InputError("system target length does not match matrix rows");
    if (!rows.empty() && rows.size() != t.size()) throw InputError("row labels do not match rows");
    if (!cols.empty() && cols.size() != A.cols()) throw InputError("column labels do not match columns");
  }
};

struct Solvable {
  RatVector witness;
};

struct Obstructed {
  IntVector certificate;
  Rational violation; // φ·t
};

class Verdict {
public:
  Verdict() = default;
  Verdict(Solvable s) : v_(std::move(s)) {}
  Verdict(Obstructed o) : v_(std::move(o)) {}

  bool solvable() const { return std::holds_alternative<Solvable>(v_); }
  bool obstructed() const { return std::holds_alternative<Obstructed>(v_); }
  const Solvable& as_solvable() const { return std::get<Solvable>(v_); }
  const Obstructed& as_obstructed() const { return std::get<Obstructed>(v_); }
  const char* status() const { return solvable() ? "solvable" : "obstructed"; }

  friend bool operator==(const Verdict& a, const Verdict& b) {
    if (a.solvable() != b.solvable()) return false;
    if (a.solvable()) return a.as_solvable().witness == b.as_solvable().witness;
    return a.as_obstructed().certificate == b.as_obstructed().certificate &&
           a.as_obstructed().violation == b.as_obstructed().violation;
  }

private:
  std::variant<Solvable, Obstructed> v_;
};

/// Size of the denominator that makes q non-integral under the locality:
/// the full denominator globally, its ell-part locally.
inline Integer obstruction_denominator(const Rational& q, const Locality& loc) {
  Integer den(q.get_den());
  if (loc.is_global()) return den;
  if (den == 1) return Integer(1);
  long v = valuation(den, loc.ell());
  return power(loc.ell(), static_cast<std::uint64_t>(v));
}

namespace detail {

struct TrackedTarget {
  SparseRowObserver U;
  RatVector s;
  TrackedTarget(std::size_t n, RatVector t) : U(n), s(std::move(t)) {}
  void swap(std::size_t a, std::size_t b) {
    U.swap(a, b);
    std::swap(s[a], s[b]);
  }
  void sub(std::size_t i, std::size_t p, const Integer& q) {
    U.sub(i, p, q);
    if (s[p] != 0) s[i] -= q * s[p];
  }
  void negate(std::size_t i) {
    U.negate(i);
    s[i] = -s[i];
  }
};

struct Reduction {
  IntMatrix H;
  std::vector<Integer> scale;
  EchelonResult echelon;
  TrackedTarget tracked;
};

inline Reduction reduce(const ObstructionSystem& sys) {
  sys.validate();
  std::vector<Integer> scale;
  IntMatrix M = sys.A.rows() == 0 && sys.A.cols() == 0 ? IntMatrix(sys.t.size(), 0)
                                                        : clear_column_denominators(sys.A, scale);
  TrackedTarget tracked(sys.t.size(), sys.t);
  EchelonResult e = echelon(M, tracked);
  return Reduction{std::move(M), std::move(scale), std::move(e), std::move(tracked)};
}

} // namespace detail

inline Verdict decide(const ObstructionSystem& sys) {
  detail::Reduction red = detail::reduce(sys);
  const std::size_t n = sys.num_rows(), h = sys.num_unknowns(), r = red.echelon.rank();
  const RatVector& s = red.tracked.s;

  // Certificate choice: largest obstruction denominator, then smallest
  // max-abs entry, then fewest nonzeros, then lowest row.
  std::size_t best = n;
  Integer best_den, best_max;
  std::size_t best_nnz = 0;
  for (std::size_t k = r; k < n; ++k) {
    if (is_integral(s[k], sys.locality)) continue;
    Integer den = obstruction_denominator(s[k], sys.locality);
    Integer mx(0);
    for (const auto& [j, v] : red.tracked.U.U[k])
      if (cmpabs(v, mx) > 0) mx = abs(v);
    std::size_t nnz = red.tracked.U.U[k].size();
    bool better = best == n || den > best_den ||
                  (den == best_den && (mx < best_max || (mx == best_max && nnz < best_nnz)));
    if (better) {
      best = k;
      best_den = den;
      best_max = mx;
      best_nnz = nnz;
    }
  }
  if (best != n) {
    IntVector phi = red.tracked.U.dense_row(best);
    // sign normalization: first nonzero entry positive
    auto first = std::find_if(phi.begin(), phi.end(), [](const Integer& v) { return v != 0; });
    Rational viol = s[best];
    if (first != phi.end() && *first < 0) {
      for (auto& v : phi) v = -v;
      viol = -viol;
    }
    return Obstructed{std::move(phi), viol};
  }

  RatVector cprime(h);
  for (std::size_t kk = r; kk-- > 0;) {
    std::size_t pc = red.echelon.pivot_cols[kk];
    Rational rhs = Rational(floor(s[kk])) - s[kk];
    for (std::size_t j = pc + 1; j < h; ++j)
      if (red.H(kk, j) != 0 && cprime[j] != 0) rhs -= Rational(red.H(kk, j)) * cprime[j];
    cprime[pc] = rhs / Rational(red.H(kk, pc));
  }
  RatVector witness(h);
  for (std::size_t j = 0; j < h; ++j) witness[j] = cprime[j] * Rational(red.scale[j]);
  return Solvable{std::move(witness)};
}

/// Re-checks a verdict by direct arithmetic; no row reduction involved.
inline bool verify_verdict(const ObstructionSystem& sys, const Verdict& verdict) {
  const std::size_t n = sys.num_rows(), h = sys.num_unknowns();
  if (sys.A.rows() != n && h != 0) return false;
  if (verdict.solvable()) {
    const RatVector& w = verdict.as_solvable().witness;
    if (w.size() != h) return false;
    for (std::size_t i = 0; i < n; ++i) {
      Rational v = sys.t[i];
      for (std::size_t j = 0; j < h; ++j)
        if (sys.A(i, j) != 0 && w[j] != 0) v += sys.A(i, j) * w[j];
      if (!is_integral(v, sys.locality)) return false;
    }
    return true;
  }
  const Obstructed& ob = verdict.as_obstructed();
  if (ob.certificate.size() != n) return false;
  for (std::size_t j = 0; j < h; ++j) {
    Rational v(0);
    for (std::size_t i = 0; i < n; ++i)
      if (ob.certificate[i] != 0 && sys.A(i, j) != 0) v += Rational(ob.certificate[i]) * sys.A(i, j);
    if (v != 0) return false;
  }
  Rational pairing(0);
  for (std::size_t i = 0; i < n; ++i)
    if (ob.certificate[i] != 0) pairing += Rational(ob.certificate[i]) * sys.t[i];
  return pairing == ob.violation && !is_integral(pairing, sys.locality);
}

/// A family e ↦ system whose matrix is fixed and whose target is e·τ.
using SystemFamily = std::function<ObstructionSystem(std::uint64_t)>;

/// Positive generator of the subgroup {e : decide(family(e)) is Solvable}.
inline Integer feasible_degree_generator(const SystemFamily& family) {
  ObstructionSystem s1 = family(1), s2 = family(2), s3 = family(3);
  if (!(s1.A == s2.A) || !(s1.A == s3.A) || s1.t.size() != s2.t.size() || s1.t.size() != s3.t.size() ||
      !(s1.locality == s2.locality))
    throw InputError("system family is not linear in e: matrix depends on e");
  for (std::size_t i = 0; i < s1.t.size(); ++i)
    if (s2.t[i] != 2 * s1.t[i] || s3.t[i] != 3 * s1.t[i])
      throw InputError("system family is not linear in e: target is not e·τ");
  detail::Reduction red = detail::reduce(s1);
  Integer gen(1);
  for (std::size_t k = red.echelon.rank(); k < s1.num_rows(); ++k)
    gen = lcm(gen, obstruction_denominator(red.tracked.s[k], s1.locality));
  return gen;
}

} // namespace pindex
