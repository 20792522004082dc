#pragma once

// Sparse exact arithmetic in H*(E_1 x ... x E_g; Z), the exterior algebra on
// 2g degree-one generators x_1, y_1, ..., x_g, y_g.
//
// A monomial is a bitmask over generator *positions* 0..2g-1. Products are
// signed by the parity of the inversions needed to merge two ascending
// position sequences. A ProductRing decides which generator sits at which
// position; the default order is x_1 < y_1 < x_2 < ... < y_g, and any other
// order is a unimodular relabeling of the same lattice.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "pindex/errors.hpp"
#include "pindex/rational.hpp"

namespace pindex {

using Monomial = std::uint64_t;

inline constexpr int kMaxFactors = 32;

inline int degree(Monomial m) { return std::popcount(m); }

/// Sign (+1/-1) of a ∧ b for disjoint ascending monomials, 0 if they overlap.
inline int merge_sign(Monomial a, Monomial b) {
  if (a & b) return 0;
  int inversions = 0;
  for (Monomial rest = b; rest; rest &= rest - 1) {
    int pos = std::countr_zero(rest);
    Monomial above = pos >= 63 ? 0 : (~Monomial{0} << (pos + 1));
    inversions += std::popcount(a & above);
  }
  return (inversions & 1) ? -1 : 1;
}

class ExteriorClass {
public:
  using Terms = std::map<Monomial, Rational>;

  ExteriorClass() = default;
  explicit ExteriorClass(int g) : g_(check_g(g)) {}

  static ExteriorClass scalar(int g, const Rational& c) {
    ExteriorClass out(g);
    out.add_term(0, c);
    return out;
  }

  static ExteriorClass monomial(int g, Monomial m, const Rational& c = Rational(1)) {
    ExteriorClass out(g);
    if (g < kMaxFactors && (m >> (2 * g)) != 0) throw InputError("monomial outside ring with g=" + std::to_string(g));
    out.add_term(m, c);
    return out;
  }

  int g() const { return g_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Adds c·m in place, dropping the term if it cancels.
  void add_term(Monomial m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rational coefficient(Monomial m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// Degree if every term has the same degree; -1 for zero or mixed classes.
  int homogeneous_degree() const {
    if (terms_.empty()) return -1;
    int d = degree(terms_.begin()->first);
    for (const auto& [m, c] : terms_)
      if (degree(m) != d) return -1;
    return d;
  }

  /// True when the class is zero or homogeneous of degree d.
  bool is_homogeneous(int d) const {
    for (const auto& [m, c] : terms_)
      if (degree(m) != d) return false;
    return true;
  }

  /// Component of degree d.
  ExteriorClass part(int d) const {
    ExteriorClass out(g_);
    for (const auto& [m, c] : terms_)
      if (degree(m) == d) out.terms_.emplace(m, c);
    return out;
  }

  ExteriorClass& operator+=(const ExteriorClass& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  ExteriorClass& operator-=(const ExteriorClass& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  ExteriorClass& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend ExteriorClass operator+(ExteriorClass a, const ExteriorClass& b) { return a += b; }
  friend ExteriorClass operator-(ExteriorClass a, const ExteriorClass& b) { return a -= b; }
  friend ExteriorClass operator-(ExteriorClass a) { return a *= Rational(-1); }
  friend ExteriorClass operator*(ExteriorClass a, const Rational& s) { return a *= s; }
  friend ExteriorClass operator*(const Rational& s, ExteriorClass a) { return a *= s; }

  friend bool operator==(const ExteriorClass& a, const ExteriorClass& b) {
    return a.g_ == b.g_ && a.terms_ == b.terms_;
  }

  void check_same(const ExteriorClass& o) const {
    if (g_ != o.g_)
      throw InputError("classes from different rings: g=" + std::to_string(g_) + " vs g=" + std::to_string(o.g_));
  }

private:
  static int check_g(int g) {
    if (g < 0 || g > kMaxFactors) throw InputError("number of factors must lie in 0.." + std::to_string(kMaxFactors));
    return g;
  }

  int g_ = 0;
  Terms terms_;
};

/// Cup product.
inline ExteriorClass wedge(const ExteriorClass& a, const ExteriorClass& b) {
  a.check_same(b);
  ExteriorClass out(a.g());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      int s = merge_sign(ma, mb);
      if (s == 0) continue;
      Rational c = ca * cb;
      if (s < 0) c = -c;
      out.add_term(ma | mb, c);
    }
  }
  return out;
}

/// k-fold cup product; power(a, 0) = 1.
inline ExteriorClass power(const ExteriorClass& a, std::uint64_t k) {
  ExteriorClass out = ExteriorClass::scalar(a.g(), Rational(1));
  for (std::uint64_t i = 0; i < k; ++i) {
    out = wedge(out, a);
    if (out.is_zero()) break;
  }
  return out;
}

inline Rational coefficient(const ExteriorClass& a, Monomial m) { return a.coefficient(m); }

inline bool is_integral(const ExteriorClass& a, const Locality& loc) {
  for (const auto& [m, c] : a.terms())
    if (!is_integral(c, loc)) return false;
  return true;
}

/// lcm of all coefficient denominators (1 for the zero class).
inline Integer denominator_lcm(const ExteriorClass& a) {
  Integer l(1);
  for (const auto& [m, c] : a.terms()) l = lcm(l, Integer(c.get_den()));
  return l;
}

/// Basis of degree-2j Hodge classes: products ω_{i_1}···ω_{i_j} with
/// increasing indices, listed in lexicographic order of the index tuples.
struct HodgeBasis {
  int degree = 0; // j
  std::vector<std::vector<int>> indices;
  std::vector<ExteriorClass> elements;

  std::size_t size() const { return elements.size(); }
};

/// g elliptic factors plus an integrality mode. `order[k]` is the position of
/// generator k, where generator 2(i-1) is x_i and 2(i-1)+1 is y_i.
class ProductRing {
public:
  ProductRing() = default;
  explicit ProductRing(int g, Locality loc = Locality::global()) : g_(g), locality_(loc) {
    if (g < 1 || g > kMaxFactors)
      throw InputError("number of elliptic factors must lie in 1.." + std::to_string(kMaxFactors) +
                       ", got " + std::to_string(g));
    order_.resize(static_cast<std::size_t>(2 * g));
    std::iota(order_.begin(), order_.end(), 0);
  }

  ProductRing(int g, Locality loc, std::vector<int> order) : ProductRing(g, loc) {
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != order_) throw InputError("generator order must be a permutation of 0..2g-1");
    order_ = std::move(order);
  }

  int g() const { return g_; }
  const Locality& locality() const { return locality_; }
  const std::vector<int>& order() const { return order_; }
  bool canonical_order() const {
    for (std::size_t k = 0; k < order_.size(); ++k)
      if (order_[k] != static_cast<int>(k)) return false;
    return true;
  }

  ProductRing with_locality(Locality loc) const {
    ProductRing r = *this;
    r.locality_ = loc;
    return r;
  }

  std::size_t rank() const { return std::size_t{1} << (2 * g_); }
  Integer rank_of_degree(int d) const { return binomial(static_cast<std::uint64_t>(2 * g_), static_cast<std::uint64_t>(d)); }

  int position_x(int i) const { return order_.at(static_cast<std::size_t>(2 * (check_index(i) - 1))); }
  int position_y(int i) const { return order_.at(static_cast<std::size_t>(2 * (check_index(i) - 1) + 1)); }

  ExteriorClass x(int i) const { return ExteriorClass::monomial(g_, Monomial{1} << position_x(i)); }
  ExteriorClass y(int i) const { return ExteriorClass::monomial(g_, Monomial{1} << position_y(i)); }
  ExteriorClass one() const { return ExteriorClass::scalar(g_, Rational(1)); }
  ExteriorClass zero() const { return ExteriorClass(g_); }

  /// ω_i = x_i ∧ y_i.
  ExteriorClass omega(int i) const { return wedge(x(i), y(i)); }

  /// Generator name at a bit position ("x3", "y1", ...).
  std::string name_at(int pos) const {
    for (std::size_t k = 0; k < order_.size(); ++k)
      if (order_[k] == pos) return std::string(k % 2 == 0 ? "x" : "y") + std::to_string(k / 2 + 1);
    throw InputError("position outside ring: " + std::to_string(pos));
  }

  /// Position of a generator given by name.
  int position_of(const std::string& name) const {
    if (name.size() < 2 || (name[0] != 'x' && name[0] != 'y')) throw InputError("bad generator name '" + name + "'");
    int i = 0;
    for (std::size_t k = 1; k < name.size(); ++k) {
      if (name[k] < '0' || name[k] > '9') throw InputError("bad generator name '" + name + "'");
      i = i * 10 + (name[k] - '0');
      if (i > g_) break;
    }
    check_index(i);
    return name[0] == 'x' ? position_x(i) : position_y(i);
  }

  /// Class of the wedge of named generators taken in the given order.
  ExteriorClass from_names(const std::vector<std::string>& names, const Rational& coeff = Rational(1)) const {
    ExteriorClass out = ExteriorClass::scalar(g_, coeff);
    for (const auto& n : names) {
      ExteriorClass gen = ExteriorClass::monomial(g_, Monomial{1} << position_of(n));
      out = wedge(out, gen);
      if (out.is_zero()) throw InputError("repeated generator '" + n + "' in monomial");
    }
    return out;
  }

  /// Names of the generators in a monomial, ascending by position.
  std::vector<std::string> names(Monomial m) const {
    std::vector<std::string> out;
    for (Monomial rest = m; rest; rest &= rest - 1) out.push_back(name_at(std::countr_zero(rest)));
    return out;
  }

  /// b(t) = Σ_{i=1..t} x_i ∧ y_{i+1}.
  ExteriorClass standard_b(int t) const {
    if (t < 0 || t > g_ - 1) throw InputError("standard(t) needs 0 <= t <= g-1, got t=" + std::to_string(t));
    ExteriorClass b(g_);
    for (int i = 1; i <= t; ++i) b += wedge(x(i), y(i + 1));
    return b;
  }

  /// Relabels a class from a ring with the same g into this ring's order:
  /// generator k of `from` goes to generator k here.
  ExteriorClass transport(const ExteriorClass& a, const ProductRing& from) const {
    if (from.g() != g_ || a.g() != g_) throw InputError("transport between rings of different g");
    std::vector<int> target_of_pos(order_.size());
    for (std::size_t k = 0; k < order_.size(); ++k) target_of_pos[static_cast<std::size_t>(from.order_[k])] = order_[k];
    ExteriorClass out(g_);
    for (const auto& [m, c] : a.terms()) {
      ExteriorClass img = ExteriorClass::scalar(g_, c);
      for (Monomial rest = m; rest; rest &= rest - 1) {
        int pos = std::countr_zero(rest);
        img = wedge(img, ExteriorClass::monomial(g_, Monomial{1} << target_of_pos[static_cast<std::size_t>(pos)]));
      }
      out += img;
    }
    return out;
  }

  friend bool operator==(const ProductRing&, const ProductRing&) = default;

private:
  int check_index(int i) const {
    if (i < 1 || i > g_) throw InputError("factor index " + std::to_string(i) + " outside 1.." + std::to_string(g_));
    return i;
  }

  int g_ = 0;
  Locality locality_;
  std::vector<int> order_;
};

inline std::vector<std::vector<int>> increasing_subsets(int g, int j) {
  std::vector<std::vector<int>> out;
  if (j < 0 || j > g) return out;
  std::vector<int> cur(static_cast<std::size_t>(j));
  std::iota(cur.begin(), cur.end(), 1);
  while (true) {
    out.push_back(cur);
    int k = j - 1;
    while (k >= 0 && cur[static_cast<std::size_t>(k)] == g - (j - 1 - k)) --k;
    if (k < 0) break;
    ++cur[static_cast<std::size_t>(k)];
    for (int l = k + 1; l < j; ++l) cur[static_cast<std::size_t>(l)] = cur[static_cast<std::size_t>(l - 1)] + 1;
  }
  return out;
}

inline HodgeBasis hodge_basis(const ProductRing& ring, int j) {
  if (j < 0 || j > ring.g())
    throw InputError("Hodge degree j=" + std::to_string(j) + " outside 0.." + std::to_string(ring.g()));
  HodgeBasis hb;
  hb.degree = j;
  hb.indices = increasing_subsets(ring.g(), j);
  for (const auto& idx : hb.indices) {
    ExteriorClass e = ring.one();
    for (int i : idx) e = wedge(e, ring.omega(i));
    hb.elements.push_back(std::move(e));
  }
  return hb;
}

/// All monomials of degree d over 2g positions, ascending as integers.
inline std::vector<Monomial> monomials_of_degree(int g, int d) {
  std::vector<Monomial> out;
  int n = 2 * g;
  if (d < 0 || d > n) return out;
  if (d == 0) return {Monomial{0}};
  Monomial m = (Monomial{1} << d) - 1;
  Monomial limit = n >= 64 ? ~Monomial{0} : (Monomial{1} << n);
  while (m < limit) {
    out.push_back(m);
    // next bit permutation with the same popcount
    Monomial t = m | (m - 1);
    Monomial next = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(m) + 1));
    if (next <= m) break;
    m = next;
  }
  return out;
}

} // namespace pindex
