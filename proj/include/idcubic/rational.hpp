#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "idcubic/error.hpp"

namespace idc {

using BigInt = boost::multiprecision::cpp_int;
// cpp_rational keeps numerator/denominator reduced with a positive
// denominator, and zero is stored as 0/1.
using Rational = boost::multiprecision::cpp_rational;
// 50 significant decimal digits; used wherever an irrational root or a
// large-gamma witness evaluation has to survive cancellation.
using Real = boost::multiprecision::cpp_bin_float_50;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw DomainError("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(BigInt(num), BigInt(den));
}

inline BigInt numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline int sign(const Rational& q) { return q.sign(); }

inline Rational abs_of(const Rational& q) { return q.sign() < 0 ? Rational(-q) : q; }

namespace detail {

inline bool parse_bigint(std::string_view s, BigInt& out) {
  if (s.empty()) return false;
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) return false;
  BigInt v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = neg ? BigInt(-v) : v;
  return true;
}

}  // namespace detail

// Accepts "p", "p/q" with optional sign on p. Surrounding whitespace is
// rejected so that field errors surface early.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  BigInt num, den = 1;
  if (slash == std::string_view::npos) {
    if (!detail::parse_bigint(text, num))
      throw InputError("invalid rational literal '" + std::string(text) + "'");
  } else {
    if (!detail::parse_bigint(text.substr(0, slash), num) ||
        !detail::parse_bigint(text.substr(slash + 1), den))
      throw InputError("invalid rational literal '" + std::string(text) + "'");
    if (den == 0)
      throw InputError("zero denominator in rational literal '" + std::string(text) + "'");
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(num, den);
}

inline std::string to_string(const Rational& q) {
  const BigInt den = denominator_of(q);
  if (den == 1) return numerator_of(q).str();
  return numerator_of(q).str() + "/" + den.str();
}

inline Real to_real(const Rational& q) {
  return Real(numerator_of(q)) / Real(denominator_of(q));
}

inline double to_double(const Rational& q) { return static_cast<double>(to_real(q)); }

// floor(n^(1/k)) for n >= 0, by integer Newton iteration.
inline BigInt iroot_floor(const BigInt& n, unsigned k) {
  if (n < 0) throw DomainError("iroot_floor of a negative integer");
  if (n < 2 || k == 1) return n;
  const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(n)) + 1;
  BigInt x = BigInt(1) << ((bits + k - 1) / k);  // x >= true root
  while (true) {
    BigInt xk1 = boost::multiprecision::pow(x, k - 1);
    BigInt y = ((k - 1) * x + n / xk1) / k;
    if (y >= x) break;
    x = y;
  }
  while (boost::multiprecision::pow(x, k) > n) --x;
  while (boost::multiprecision::pow(x + 1, k) <= n) ++x;
  return x;
}

// Exact real k-th root of an integer, if it is one.
inline std::optional<BigInt> exact_iroot(const BigInt& n, unsigned k) {
  if (k == 0) throw DomainError("root degree must be positive");
  if (n < 0) {
    if (k % 2 == 0) return std::nullopt;
    auto r = exact_iroot(BigInt(-n), k);
    if (!r) return std::nullopt;
    return BigInt(-*r);
  }
  BigInt r = iroot_floor(n, k);
  if (boost::multiprecision::pow(r, k) == n) return r;
  return std::nullopt;
}

// Sign-preserving real k-th root of q when numerator and denominator are
// both perfect k-th powers; nullopt otherwise (and for negative q, even k).
inline std::optional<Rational> exact_root(const Rational& q, unsigned k) {
  auto n = exact_iroot(numerator_of(q), k);
  if (!n) return std::nullopt;
  auto d = exact_iroot(denominator_of(q), k);
  if (!d) return std::nullopt;
  return Rational(*n, *d);
}

inline Rational ipow(const Rational& q, unsigned k) {
  Rational r = 1;
  for (unsigned i = 0; i < k; ++i) r *= q;
  return r;
}

// Real odd root, sign preserving.
inline Real real_root(const Real& x, unsigned k) {
  if (x == 0) return Real(0);
  if (x < 0) {
    if (k % 2 == 0) throw DomainError("even root of a negative number");
    return -boost::multiprecision::pow(Real(-x), Real(1) / k);
  }
  return boost::multiprecision::pow(x, Real(1) / k);
}

}  // namespace idc
