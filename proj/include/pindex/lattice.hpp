#pragma once

// Integer row reduction: echelon form under unimodular row operations,
// Hermite normal form, and saturated integer left kernels.
//
// Conventions: H = U·M where U is unimodular and H is in row-style Hermite
// normal form (pivots positive and strictly moving right, zero rows last,
// entries above a pivot reduced into [0, pivot)). H depends only on the row
// lattice of M, so it is invariant under row permutations of the input.

#include <cstddef>
#include <map>
#include <vector>

#include "pindex/matrix.hpp"
#include "pindex/rational.hpp"

namespace pindex {

/// Receives the row operations performed on M.
struct NullRowObserver {
  void swap(std::size_t, std::size_t) {}
  void sub(std::size_t, std::size_t, const Integer&) {}
  void negate(std::size_t) {}
};

/// Tracks U densely.
struct DenseRowObserver {
  IntMatrix U;
  explicit DenseRowObserver(std::size_t n) : U(IntMatrix::identity(n)) {}
  void swap(std::size_t a, std::size_t b) { U.swap_rows(a, b); }
  void sub(std::size_t i, std::size_t p, const Integer& q) {
    for (std::size_t j = 0; j < U.cols(); ++j)
      if (U(p, j) != 0) U(i, j) -= q * U(p, j);
  }
  void negate(std::size_t i) {
    for (std::size_t j = 0; j < U.cols(); ++j) U(i, j) = -U(i, j);
  }
};

/// Tracks U as sparse rows; rows never touched stay unit vectors.
struct SparseRowObserver {
  std::vector<std::map<std::size_t, Integer>> U;
  explicit SparseRowObserver(std::size_t n) : U(n) {
    for (std::size_t i = 0; i < n; ++i) U[i].emplace(i, Integer(1));
  }
  void swap(std::size_t a, std::size_t b) { std::swap(U[a], U[b]); }
  void sub(std::size_t i, std::size_t p, const Integer& q) {
    for (const auto& [j, v] : U[p]) {
      auto [it, inserted] = U[i].try_emplace(j, 0);
      it->second -= q * v;
      if (it->second == 0) U[i].erase(it);
    }
  }
  void negate(std::size_t i) {
    for (auto& [j, v] : U[i]) v = -v;
  }
  IntVector dense_row(std::size_t i) const {
    IntVector out(U.size());
    for (const auto& [j, v] : U[i]) out[j] = v;
    return out;
  }
};

struct EchelonResult {
  std::vector<std::size_t> pivot_cols; // pivot of row k is pivot_cols[k]
  std::size_t rank() const { return pivot_cols.size(); }
};

/// Brings M to row echelon form in place with positive pivots. Every
/// operation is reported to `obs` so U·M_in = M_out can be reconstructed.
template <typename Observer>
EchelonResult echelon(IntMatrix& M, Observer& obs) {
  EchelonResult res;
  const std::size_t n = M.rows(), h = M.cols();
  std::size_t p = 0;
  // rows that are identically zero never participate
  std::vector<char> live(n, 0);
  for (std::size_t i = 0; i < n; ++i) live[i] = !M.is_zero_row(i);
  Integer q;
  for (std::size_t c = 0; c < h && p < n; ++c) {
    while (true) {
      std::size_t best = n;
      for (std::size_t i = p; i < n; ++i) {
        if (!live[i] || M(i, c) == 0) continue;
        if (best == n || cmpabs(M(i, c), M(best, c)) < 0) best = i;
      }
      if (best == n) break;
      if (best != p) {
        M.swap_rows(best, p);
        std::swap(live[best], live[p]);
        obs.swap(best, p);
      }
      bool clean = true;
      for (std::size_t i = p + 1; i < n; ++i) {
        if (!live[i] || M(i, c) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), M(i, c).get_mpz_t(), M(p, c).get_mpz_t());
        if (q != 0) {
          for (std::size_t j = c; j < h; ++j)
            if (M(p, j) != 0) M(i, j) -= q * M(p, j);
          obs.sub(i, p, q);
        }
        if (M(i, c) != 0) clean = false;
        else if (M.is_zero_row(i)) live[i] = 0;
      }
      if (clean) {
        if (M(p, c) < 0) {
          for (std::size_t j = c; j < h; ++j) M(p, j) = -M(p, j);
          obs.negate(p);
        }
        res.pivot_cols.push_back(c);
        ++p;
        break;
      }
    }
  }
  return res;
}

/// Reduces entries above each pivot into [0, pivot).
template <typename Observer>
void reduce_above_pivots(IntMatrix& M, const EchelonResult& e, Observer& obs) {
  Integer q;
  for (std::size_t p = 0; p < e.rank(); ++p) {
    std::size_t c = e.pivot_cols[p];
    for (std::size_t i = 0; i < p; ++i) {
      mpz_fdiv_q(q.get_mpz_t(), M(i, c).get_mpz_t(), M(p, c).get_mpz_t());
      if (q == 0) continue;
      for (std::size_t j = c; j < M.cols(); ++j)
        if (M(p, j) != 0) M(i, j) -= q * M(p, j);
      obs.sub(i, p, q);
    }
  }
}

struct HermiteForm {
  IntMatrix H;
  IntMatrix U;
  std::size_t rank = 0;
};

/// Row-style Hermite normal form with transform: H = U·M.
inline HermiteForm hermite_normal_form(const IntMatrix& M) {
  HermiteForm out;
  out.H = M;
  DenseRowObserver obs(M.rows());
  EchelonResult e = echelon(out.H, obs);
  reduce_above_pivots(out.H, e, obs);
  out.U = std::move(obs.U);
  out.rank = e.rank();
  return out;
}

/// Nonzero rows of the Hermite normal form: a canonical basis of the row lattice.
inline std::vector<IntVector> canonical_row_basis(const IntMatrix& M) {
  IntMatrix H = M;
  NullRowObserver obs;
  EchelonResult e = echelon(H, obs);
  reduce_above_pivots(H, e, obs);
  std::vector<IntVector> out;
  for (std::size_t i = 0; i < e.rank(); ++i) out.push_back(H.row(i));
  return out;
}

inline IntMatrix matrix_from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
  IntMatrix M(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw InputError("vector of wrong length");
    for (std::size_t j = 0; j < cols; ++j) M(i, j) = rows[i][j];
  }
  return M;
}

/// Scales each column by the lcm of its denominators; returns the factors.
inline IntMatrix clear_column_denominators(const RatMatrix& A, std::vector<Integer>& scale) {
  scale.assign(A.cols(), Integer(1));
  for (std::size_t j = 0; j < A.cols(); ++j)
    for (std::size_t i = 0; i < A.rows(); ++i)
      if (A(i, j) != 0) scale[j] = lcm(scale[j], Integer(A(i, j).get_den()));
  IntMatrix M(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) {
      if (A(i, j) == 0) continue;
      Rational v = A(i, j) * scale[j];
      M(i, j) = v.get_num();
    }
  return M;
}

/// Z-basis of {φ ∈ Z^N : φ·A = 0}, in Hermite normal form.
inline std::vector<IntVector> saturated_integer_left_kernel(const RatMatrix& A) {
  std::vector<Integer> scale;
  IntMatrix M = clear_column_denominators(A, scale);
  SparseRowObserver obs(M.rows());
  EchelonResult e = echelon(M, obs);
  std::vector<IntVector> rows;
  for (std::size_t k = e.rank(); k < M.rows(); ++k) rows.push_back(obs.dense_row(k));
  if (rows.empty()) return rows;
  return canonical_row_basis(matrix_from_rows(rows, M.rows()));
}

/// Q-span of the given integer vectors intersected with Z^N, in HNF.
inline std::vector<IntVector> saturate(const std::vector<IntVector>& rows, std::size_t dim) {
  if (rows.empty()) return {};
  // vectors v with φ·v = 0 for every φ in the kernel of the span
  RatMatrix cols(dim, rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t i = 0; i < dim; ++i) cols(i, j) = Rational(rows[j][i]);
  std::vector<IntVector> dual = saturated_integer_left_kernel(cols);
  RatMatrix dual_cols(dim, dual.size());
  for (std::size_t j = 0; j < dual.size(); ++j)
    for (std::size_t i = 0; i < dim; ++i) dual_cols(i, j) = Rational(dual[j][i]);
  if (dual.empty()) {
    std::vector<IntVector> unit;
    for (std::size_t i = 0; i < dim; ++i) {
      IntVector v(dim);
      v[i] = 1;
      unit.push_back(v);
    }
    return unit;
  }
  return saturated_integer_left_kernel(dual_cols);
}

inline bool same_row_lattice(const std::vector<IntVector>& a, const std::vector<IntVector>& b, std::size_t dim) {
  auto basis = [dim](const std::vector<IntVector>& v) {
    return v.empty() ? std::vector<IntVector>{} : canonical_row_basis(matrix_from_rows(v, dim));
  };
  return basis(a) == basis(b);
}

/// gcd of the entries is 1.
inline bool is_primitive(const IntVector& v) {
  Integer g(0);
  for (const auto& x : v) g = gcd(g, x);
  return g == 1;
}

} // namespace pindex
