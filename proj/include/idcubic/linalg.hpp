#pragma once

// Dense linear algebra over exact rationals (and, with a tolerance, over
// floating types): rank, kernels, images, subspace arithmetic, and solves
// constrained to a subspace.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "idcubic/matrix.hpp"

namespace idc {

// ---- fraction-free elimination -------------------------------------------

namespace detail {

inline BigInt lcm_big(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  BigInt g = boost::multiprecision::gcd(a, b);
  return boost::multiprecision::abs(a / g * b);
}

// Each row multiplied by the lcm of its denominators; rank and the zero
// pattern of the determinant are unchanged.
inline std::vector<std::vector<BigInt>> integer_rows(const RatMatrix& a) {
  std::vector<std::vector<BigInt>> out(a.rows(), std::vector<BigInt>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    BigInt l = 1;
    for (std::size_t j = 0; j < a.cols(); ++j) l = lcm_big(l, denominator_of(a(i, j)));
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Rational scaled = a(i, j) * Rational(l);
      out[i][j] = numerator_of(scaled);
    }
  }
  return out;
}

struct BareissResult {
  std::size_t rank = 0;
  BigInt last_pivot = 1;  // determinant of the integer matrix up to sign, when full rank
  int swaps_sign = 1;
};

// Bareiss elimination in place, pivoting on the largest magnitude entry of
// the current column. Intermediate entries stay integral and bounded by
// minors of the input.
inline BareissResult bareiss(std::vector<std::vector<BigInt>>& a, std::size_t cols) {
  const std::size_t rows = a.size();
  BareissResult res;
  BigInt prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t best = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      if (best == rows || boost::multiprecision::abs(a[i][c]) > boost::multiprecision::abs(a[best][c])) best = i;
    }
    if (best == rows) continue;
    if (best != r) {
      std::swap(a[best], a[r]);
      res.swaps_sign = -res.swaps_sign;
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  res.rank = r;
  res.last_pivot = prev;
  return res;
}

}  // namespace detail

inline std::size_t rank(const RatMatrix& m) {
  auto rows = detail::integer_rows(m);
  return detail::bareiss(rows, m.cols()).rank;
}

inline Rational determinant(const RatMatrix& m) {
  if (!m.is_square()) throw DimensionError("determinant of a non-square matrix");
  if (m.rows() == 0) return 1;
  auto rows = detail::integer_rows(m);
  // Undo the row scaling afterwards.
  Rational scale = 1;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    BigInt l = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) l = detail::lcm_big(l, denominator_of(m(i, j)));
    scale *= Rational(l);
  }
  auto res = detail::bareiss(rows, m.cols());
  if (res.rank < m.rows()) return 0;
  return Rational(res.last_pivot) * res.swaps_sign / scale;
}

// ---- reduced row echelon form ----------------------------------------------

template <class T>
struct Echelon {
  BasicMatrix<T> reduced;            // reduced row echelon form, zero rows last
  std::vector<std::size_t> pivots;   // pivot column per nonzero row
};

template <class T>
T matrix_scale(const BasicMatrix<T>& a) {
  T s = T(0);
  for (const auto& x : a.data()) {
    T mag = ScalarTraits<T>::magnitude(x);
    if (mag > s) s = mag;
  }
  return s;
}

// Gauss-Jordan elimination. Entries that are negligible for the scalar type
// (exactly zero for rationals) are treated as zero and flushed.
template <class T>
Echelon<T> rref(BasicMatrix<T> a) {
  using Tr = ScalarTraits<T>;
  const T scale = matrix_scale(a);
  Echelon<T> out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t best = a.rows();
    T best_mag = T(0);
    for (std::size_t i = r; i < a.rows(); ++i) {
      if (Tr::negligible(a(i, c), scale)) continue;
      T mag = Tr::magnitude(a(i, c));
      if (best == a.rows() || mag > best_mag) {
        best = i;
        best_mag = mag;
      }
    }
    if (best == a.rows()) {
      for (std::size_t i = r; i < a.rows(); ++i) a(i, c) = T(0);
      continue;
    }
    if (best != r)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(best, j), a(r, j));
    const T inv = T(1) / a(r, c);
    for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
    a(r, c) = T(1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      const T f = a(i, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
      a(i, c) = T(0);
    }
    out.pivots.push_back(c);
    ++r;
  }
  if constexpr (!Tr::exact) {
    for (std::size_t i = r; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = T(0);
  }
  out.reduced = std::move(a);
  return out;
}

// ---- subspaces --------------------------------------------------------------

// A linear subspace of T^n. The basis is kept in canonical form: the nonzero
// rows of the reduced row echelon form of any spanning set. Two subspaces are
// equal iff their canonical bases are equal.
template <class T>
class BasicSubspace {
 public:
  BasicSubspace() = default;
  explicit BasicSubspace(std::size_t ambient_dim) : ambient_(ambient_dim) {}

  static BasicSubspace span(std::size_t ambient_dim, const std::vector<BasicVector<T>>& vectors) {
    BasicSubspace s(ambient_dim);
    if (vectors.empty()) return s;
    for (const auto& v : vectors)
      if (v.size() != ambient_dim) throw DimensionError("span: vector length differs from ambient dimension");
    auto e = rref(BasicMatrix<T>::from_rows(vectors));
    for (std::size_t i = 0; i < e.pivots.size(); ++i) s.basis_.push_back(e.reduced.row(i));
    s.pivots_ = std::move(e.pivots);
    return s;
  }

  static BasicSubspace full(std::size_t ambient_dim) {
    std::vector<BasicVector<T>> e;
    for (std::size_t i = 0; i < ambient_dim; ++i) e.push_back(unit_vector<T>(ambient_dim, i));
    return span(ambient_dim, e);
  }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  bool is_zero() const { return basis_.empty(); }
  const std::vector<BasicVector<T>>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  // Component of v outside the span, using the echelon pivots. Zero iff v
  // lies in the subspace.
  BasicVector<T> residual(const BasicVector<T>& v) const {
    if (v.size() != ambient_) throw DimensionError("subspace membership: dimension mismatch");
    BasicVector<T> r = v;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      const T c = r[pivots_[i]];
      if (c == 0) continue;
      for (std::size_t j = 0; j < ambient_; ++j) r[j] -= c * basis_[i][j];
    }
    return r;
  }

  bool contains(const BasicVector<T>& v) const {
    const auto r = residual(v);
    T scale = T(0);
    for (const auto& x : v) scale = std::max<T>(scale, ScalarTraits<T>::magnitude(x));
    return std::all_of(r.begin(), r.end(), [&](const T& x) { return ScalarTraits<T>::negligible(x, scale); });
  }

  bool contains(const BasicSubspace& other) const {
    return std::all_of(other.basis_.begin(), other.basis_.end(), [&](const auto& b) { return contains(b); });
  }

  bool operator==(const BasicSubspace& o) const { return ambient_ == o.ambient_ && basis_ == o.basis_; }

  // Basis vectors as matrix columns (ambient x dim).
  BasicMatrix<T> as_columns() const { return BasicMatrix<T>::from_columns(basis_, ambient_); }

 private:
  std::size_t ambient_ = 0;
  std::vector<BasicVector<T>> basis_;
  std::vector<std::size_t> pivots_;
};

using Subspace = BasicSubspace<Rational>;
using RealSubspace = BasicSubspace<Real>;

template <class T>
bool contains(const BasicSubspace<T>& s, const BasicVector<T>& v) {
  return s.contains(v);
}

template <class T>
BasicSubspace<T> kernel_basis(const BasicMatrix<T>& m) {
  const auto e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<BasicVector<T>> vecs;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    BasicVector<T> v(m.cols(), T(0));
    v[f] = T(1);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.reduced(i, f);
    vecs.push_back(std::move(v));
  }
  return BasicSubspace<T>::span(m.cols(), vecs);
}

template <class T>
BasicSubspace<T> image_basis(const BasicMatrix<T>& m) {
  std::vector<BasicVector<T>> cols;
  for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(m.col(j));
  return BasicSubspace<T>::span(m.rows(), cols);
}

template <class T>
BasicSubspace<T> subspace_image(const BasicMatrix<T>& m, const BasicSubspace<T>& s) {
  if (m.cols() != s.ambient_dim()) throw DimensionError("subspace_image: dimension mismatch");
  std::vector<BasicVector<T>> imgs;
  for (const auto& b : s.basis()) imgs.push_back(m * b);
  return BasicSubspace<T>::span(m.rows(), imgs);
}

template <class T>
BasicSubspace<T> subspace_sum(const BasicSubspace<T>& a, const BasicSubspace<T>& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("subspace_sum: ambient mismatch");
  auto vecs = a.basis();
  vecs.insert(vecs.end(), b.basis().begin(), b.basis().end());
  return BasicSubspace<T>::span(a.ambient_dim(), vecs);
}

// Intersection through the nullspace of [B1 | -B2]: every (c1, c2) with
// B1 c1 = B2 c2 yields the common vector B1 c1.
template <class T>
BasicSubspace<T> intersect(const BasicSubspace<T>& s1, const BasicSubspace<T>& s2) {
  if (s1.ambient_dim() != s2.ambient_dim()) throw DimensionError("intersect: ambient mismatch");
  const std::size_t n = s1.ambient_dim(), d1 = s1.dim(), d2 = s2.dim();
  if (d1 == 0 || d2 == 0) return BasicSubspace<T>(n);
  BasicMatrix<T> stacked(n, d1 + d2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d1; ++j) stacked(i, j) = s1.basis()[j][i];
    for (std::size_t j = 0; j < d2; ++j) stacked(i, d1 + j) = -s2.basis()[j][i];
  }
  const auto ker = kernel_basis(stacked);
  std::vector<BasicVector<T>> common;
  for (const auto& c : ker.basis()) {
    BasicVector<T> v(n, T(0));
    for (std::size_t j = 0; j < d1; ++j)
      for (std::size_t i = 0; i < n; ++i) v[i] += c[j] * s1.basis()[j][i];
    common.push_back(std::move(v));
  }
  return BasicSubspace<T>::span(n, common);
}

// Coordinatewise rescaling W * w = { y * w : y in W }.
template <class T>
BasicSubspace<T> hadamard_scale(const BasicSubspace<T>& s, const BasicVector<T>& w) {
  if (w.size() != s.ambient_dim()) throw DimensionError("hadamard_scale: dimension mismatch");
  std::vector<BasicVector<T>> vecs;
  for (auto b : s.basis()) {
    for (std::size_t i = 0; i < b.size(); ++i) b[i] *= w[i];
    vecs.push_back(std::move(b));
  }
  return BasicSubspace<T>::span(s.ambient_dim(), vecs);
}

// Solve M x = b, free variables set to zero. nullopt if inconsistent.
template <class T>
std::optional<BasicVector<T>> solve_linear(const BasicMatrix<T>& m, const BasicVector<T>& b) {
  if (m.rows() != b.size()) throw DimensionError("solve_linear: dimension mismatch");
  BasicMatrix<T> aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  const auto e = rref(aug);
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  BasicVector<T> x(m.cols(), T(0));
  for (std::size_t i = 0; i < e.pivots.size(); ++i) x[e.pivots[i]] = e.reduced(i, m.cols());
  return x;
}

// Some u in W with M u = b, via u = W c and (M W) c = b. The returned
// representative is the canonical echelon solution (free coefficients zero).
template <class T>
std::optional<BasicVector<T>> solve_affine_in_subspace(const BasicMatrix<T>& m, const BasicVector<T>& b,
                                                       const BasicSubspace<T>& w) {
  if (m.cols() != w.ambient_dim() || m.rows() != b.size())
    throw DimensionError("solve_affine_in_subspace: dimension mismatch");
  const std::size_t n = w.ambient_dim();
  if (w.dim() == 0) {
    T scale = T(0);
    for (const auto& x : b) scale = std::max<T>(scale, ScalarTraits<T>::magnitude(x));
    const bool zero = std::all_of(b.begin(), b.end(), [&](const T& x) { return ScalarTraits<T>::negligible(x, scale); });
    if (!zero) return std::nullopt;
    return BasicVector<T>(n, T(0));
  }
  const auto basis = w.as_columns();
  const auto c = solve_linear(m * basis, b);
  if (!c) return std::nullopt;
  return basis * *c;
}

template <class T>
std::optional<BasicMatrix<T>> inverse(const BasicMatrix<T>& m) {
  if (!m.is_square()) throw DimensionError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  BasicMatrix<T> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = T(1);
  }
  const auto e = rref(aug);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  BasicMatrix<T> inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

inline bool is_upper_triangular(const RatMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < i && j < a.cols(); ++j)
      if (a(i, j) != 0) return false;
  return true;
}

inline bool is_lower_triangular(const RatMatrix& a) { return is_upper_triangular(a.transpose()); }

inline RealSubspace to_real(const Subspace& s) {
  std::vector<RealVector> vecs;
  for (const auto& b : s.basis()) vecs.push_back(to_real(b));
  return RealSubspace::span(s.ambient_dim(), vecs);
}

}  // namespace idc
