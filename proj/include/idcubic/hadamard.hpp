#pragma once

// Coordinatewise (Hadamard) vector algebra and the maps
//   F_A(x)  = x + (Ax)^k
//   F^_A(x) = x + A(x^k)
// The same templates serve exact rationals and floating vectors.

#include <cmath>
#include <optional>
#include <string>

#include "idcubic/matrix.hpp"

namespace idc {

template <class T>
BasicVector<T> hprod(const BasicVector<T>& x, const BasicVector<T>& y) {
  require_same_length(x, y, "hprod");
  BasicVector<T> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] * y[i];
  return r;
}

template <class T>
BasicVector<T> hpow(const BasicVector<T>& x, unsigned k) {
  if (k == 0) throw DomainError("hpow: exponent must be positive");
  BasicVector<T> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    T p = x[i];
    for (unsigned j = 1; j < k; ++j) p *= x[i];
    r[i] = p;
  }
  return r;
}

// x^{-k}: the vector with x^{-k} * x^k = (1,...,1).
template <class T>
BasicVector<T> hinv_pow(const BasicVector<T>& x, unsigned k) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] == 0)
      throw DomainError("not invertible coordinatewise: coordinate " + std::to_string(i) + " is zero");
  auto p = hpow(x, k);
  for (auto& v : p) v = T(1) / v;
  return p;
}

// Exact coordinatewise k-th root (k odd), nullopt if some entry is not a
// perfect k-th power.
inline std::optional<RatVector> try_hroot(const RatVector& x, unsigned k) {
  RatVector r;
  r.reserve(x.size());
  for (const auto& v : x) {
    auto root = exact_root(v, k);
    if (!root) return std::nullopt;
    r.push_back(*root);
  }
  return r;
}

inline RatVector hroot_odd(const RatVector& x, unsigned k) {
  if (k % 2 == 0) throw DomainError("hroot_odd: k must be odd");
  for (const auto& v : x)
    if (!exact_root(v, k))
      throw DomainError("entry " + to_string(v) + " is not a perfect " + std::to_string(k) +
                        "-th power; use float mode");
  return *try_hroot(x, k);
}

inline RealVector hroot_odd(const RealVector& x, unsigned k) {
  if (k % 2 == 0) throw DomainError("hroot_odd: k must be odd");
  RealVector r;
  r.reserve(x.size());
  for (const auto& v : x) r.push_back(real_root(v, k));
  return r;
}

inline FloatVector hroot_odd(const FloatVector& x, unsigned k) {
  if (k % 2 == 0) throw DomainError("hroot_odd: k must be odd");
  FloatVector r;
  r.reserve(x.size());
  for (double v : x) r.push_back(v < 0 ? -std::pow(-v, 1.0 / k) : std::pow(v, 1.0 / k));
  return r;
}

template <class T>
BasicVector<T> eval_FA(const BasicMatrix<T>& a, const BasicVector<T>& x, unsigned k = 3) {
  if (a.cols() != x.size()) throw DimensionError("eval_FA: dimension mismatch");
  return x + hpow(a * x, k);
}

template <class T>
BasicVector<T> eval_FA_hat(const BasicMatrix<T>& a, const BasicVector<T>& x, unsigned k = 3) {
  if (a.cols() != x.size()) throw DimensionError("eval_FA_hat: dimension mismatch");
  return x + a * hpow(x, k);
}

}  // namespace idc
