#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "idcubic/error.hpp"
#include "idcubic/rational.hpp"

namespace idc {

template <class T>
using BasicVector = std::vector<T>;

using RatVector = BasicVector<Rational>;
using RealVector = BasicVector<Real>;
using FloatVector = BasicVector<double>;

// Zero tests for the elimination kernels. Rationals are exact; floating
// types compare against a relative tolerance times the operand scale.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static bool negligible(const Rational& x, const Rational& /*scale*/) { return x == 0; }
  static Rational magnitude(const Rational& x) { return abs_of(x); }
};

template <>
struct ScalarTraits<Real> {
  static constexpr bool exact = false;
  static bool negligible(const Real& x, const Real& scale) {
    return boost::multiprecision::abs(x) <= Real("1e-9") * (scale > 1 ? scale : Real(1));
  }
  static Real magnitude(const Real& x) { return boost::multiprecision::abs(x); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static bool negligible(double x, double scale) { return std::abs(x) <= 1e-9 * std::max(scale, 1.0); }
  static double magnitude(double x) { return std::abs(x); }
};

// Dense row-major matrix. The certificate logic only ever uses square
// matrices, but rectangular shapes appear inside subspace computations.
template <class T>
class BasicMatrix {
 public:
  BasicMatrix() = default;
  BasicMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static BasicMatrix square(std::size_t m) { return BasicMatrix(m, m); }

  static BasicMatrix identity(std::size_t m) {
    BasicMatrix I(m, m);
    for (std::size_t i = 0; i < m; ++i) I(i, i) = T(1);
    return I;
  }

  static BasicMatrix diagonal(const BasicVector<T>& d) {
    BasicMatrix D(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) D(i, i) = d[i];
    return D;
  }

  static BasicMatrix from_rows(const std::vector<BasicVector<T>>& rows) {
    if (rows.empty()) return BasicMatrix();
    BasicMatrix M(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != M.cols_) throw DimensionError("ragged rows");
      for (std::size_t j = 0; j < M.cols_; ++j) M(i, j) = rows[i][j];
    }
    return M;
  }

  // Columns given as vectors: result is (vector length) x (count).
  static BasicMatrix from_columns(const std::vector<BasicVector<T>>& cols, std::size_t height) {
    BasicMatrix M(height, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != height) throw DimensionError("column length mismatch");
      for (std::size_t i = 0; i < height; ++i) M(i, j) = cols[j][i];
    }
    return M;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  std::size_t dim() const { return rows_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  BasicVector<T> row(std::size_t i) const {
    return BasicVector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  BasicVector<T> col(std::size_t j) const {
    BasicVector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  BasicMatrix transpose() const {
    BasicMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& x) { return x == 0; });
  }

  bool operator==(const BasicMatrix& o) const = default;

  friend BasicMatrix operator*(const BasicMatrix& a, const BasicMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
    BasicMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend BasicVector<T> operator*(const BasicMatrix& a, const BasicVector<T>& x) {
    if (a.cols_ != x.size()) throw DimensionError("matrix-vector shape mismatch");
    BasicVector<T> y(a.rows_, T(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
    return y;
  }

  friend BasicMatrix operator+(BasicMatrix a, const BasicMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("matrix sum shape mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend BasicMatrix operator-(BasicMatrix a, const BasicMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("matrix difference shape mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  friend BasicMatrix operator*(const T& s, BasicMatrix a) {
    for (auto& x : a.data_) x *= s;
    return a;
  }

  const std::vector<T>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RatMatrix = BasicMatrix<Rational>;
using RealMatrix = BasicMatrix<Real>;
using FloatMatrix = BasicMatrix<double>;

// ---- vector helpers -------------------------------------------------------

template <class T>
void require_same_length(const BasicVector<T>& a, const BasicVector<T>& b, const char* what) {
  if (a.size() != b.size())
    throw DimensionError(std::string(what) + ": length " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
}

template <class T>
T dot(const BasicVector<T>& a, const BasicVector<T>& b) {
  require_same_length(a, b, "dot");
  T s = T(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class T>
BasicVector<T> operator+(BasicVector<T> a, const BasicVector<T>& b) {
  require_same_length(a, b, "vector sum");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

template <class T>
BasicVector<T> operator-(BasicVector<T> a, const BasicVector<T>& b) {
  require_same_length(a, b, "vector difference");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

template <class T>
BasicVector<T> operator-(BasicVector<T> a) {
  for (auto& x : a) x = -x;
  return a;
}

template <class T>
BasicVector<T> scaled(const T& s, BasicVector<T> a) {
  for (auto& x : a) x *= s;
  return a;
}

template <class T>
bool is_zero_vector(const BasicVector<T>& v) {
  return std::all_of(v.begin(), v.end(), [](const T& x) { return x == 0; });
}

template <class T>
BasicVector<T> unit_vector(std::size_t m, std::size_t i) {
  BasicVector<T> e(m, T(0));
  e.at(i) = T(1);
  return e;
}

template <class T>
BasicVector<T> ones(std::size_t m) {
  return BasicVector<T>(m, T(1));
}

inline double norm2(const FloatVector& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline Real norm2(const RealVector& v) {
  Real s = 0;
  for (const auto& x : v) s += x * x;
  return boost::multiprecision::sqrt(s);
}

// ---- conversions ----------------------------------------------------------

inline RealVector to_real(const RatVector& v) {
  RealVector r;
  r.reserve(v.size());
  for (const auto& x : v) r.push_back(to_real(x));
  return r;
}

inline FloatVector to_double(const RatVector& v) {
  FloatVector r;
  r.reserve(v.size());
  for (const auto& x : v) r.push_back(to_double(x));
  return r;
}

inline FloatVector to_double(const RealVector& v) {
  FloatVector r;
  r.reserve(v.size());
  for (const auto& x : v) r.push_back(static_cast<double>(x));
  return r;
}

template <class U, class T, class F>
BasicMatrix<U> convert_matrix(const BasicMatrix<T>& a, F f) {
  BasicMatrix<U> r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = f(a(i, j));
  return r;
}

inline RealMatrix to_real(const RatMatrix& a) {
  return convert_matrix<Real>(a, [](const Rational& x) { return to_real(x); });
}

inline FloatMatrix to_double(const RatMatrix& a) {
  return convert_matrix<double>(a, [](const Rational& x) { return to_double(x); });
}

inline RatMatrix make_rat_matrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  std::vector<RatVector> rv;
  for (const auto& r : rows) {
    RatVector v;
    for (auto x : r) v.push_back(Rational(x));
    rv.push_back(std::move(v));
  }
  return RatMatrix::from_rows(rv);
}

inline RatVector make_rat_vector(std::initializer_list<std::int64_t> xs) {
  RatVector v;
  for (auto x : xs) v.push_back(Rational(x));
  return v;
}

inline std::string to_string(const RatVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += to_string(v[i]);
  }
  return s + ")";
}

}  // namespace idc
