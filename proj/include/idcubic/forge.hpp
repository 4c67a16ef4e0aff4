#pragma once

// Concrete instances: the 5x5 shift, the 3x3 non-proper family and seeded
// random samplers.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "idcubic/linalg.hpp"

namespace idc {

// Public parameters (a11, a12, a22, lambda); a21 follows from the equality
// constraint unless supplied, in which case it must agree.
struct Family3x3Params {
  Rational a11, a12, a22, lambda;
  std::optional<Rational> a21;
};

inline RatMatrix forge_3x3(const Family3x3Params& p) {
  const Rational a13 = -(p.a11 + p.a12);
  const Rational mu = 1 - p.lambda;
  if (mu == 0) throw DomainError("lambda = 1 leaves a21 undetermined (a21 (1 - lambda) = c + a22 lambda)");
  const Rational c = p.a11 + a13 * p.lambda;
  if (c == 0) throw DomainError("a11 + a13*lambda != 0 violated");
  const Rational a21 = (c + p.a22 * p.lambda) / mu;
  if (p.a21 && *p.a21 != a21) throw DomainError("a11 + a13*lambda = a21 + a23*lambda violated");
  const Rational a23 = -(a21 + p.a22);
  RatMatrix a(3, 3);
  a(0, 0) = p.a11;
  a(0, 1) = p.a12;
  a(0, 2) = a13;
  a(1, 0) = a21;
  a(1, 1) = p.a22;
  a(1, 2) = a23;
  for (std::size_t j = 0; j < 3; ++j) a(2, j) = p.lambda * a(0, j) + mu * a(1, j);
  if (rank(a) != 2) throw DomainError("rank(A) = 2 violated");
  return a;
}

inline RatMatrix shift_5x5() {
  RatMatrix a(5, 5);
  a(0, 2) = 1;
  a(1, 3) = 1;
  a(2, 4) = 1;
  return a;
}

// Integer parameter tuples of [-box, box]^4 ordered by L1 norm, then
// lexicographically.
inline std::vector<std::array<std::int64_t, 4>> family_parameter_grid(std::int64_t box = 3) {
  std::vector<std::array<std::int64_t, 4>> out;
  for (std::int64_t a = -box; a <= box; ++a)
    for (std::int64_t b = -box; b <= box; ++b)
      for (std::int64_t c = -box; c <= box; ++c)
        for (std::int64_t d = -box; d <= box; ++d) out.push_back({a, b, c, d});
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    auto l1 = [](const auto& v) {
      std::int64_t s = 0;
      for (auto e : v) s += e < 0 ? -e : e;
      return s;
    };
    return l1(x) < l1(y);
  });
  return out;
}

// First grid point whose forged matrix passes `accept`.
inline std::optional<Family3x3Params> smallest_family_member(
    const std::function<bool(const RatMatrix&)>& accept, std::int64_t box = 3) {
  for (const auto& t : family_parameter_grid(box)) {
    Family3x3Params p{Rational(t[0]), Rational(t[1]), Rational(t[2]), Rational(t[3]), std::nullopt};
    try {
      const RatMatrix a = forge_3x3(p);
      if (accept(a)) return p;
    } catch (const DomainError&) {
    }
  }
  return std::nullopt;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Random member of the family with small rational parameters.
inline std::pair<Family3x3Params, RatMatrix> random_family_member(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> num(-6, 6), den(1, 3);
  while (true) {
    Family3x3Params p{Rational(num(rng), den(rng)), Rational(num(rng), den(rng)), Rational(num(rng), den(rng)),
                      Rational(num(rng), den(rng)), std::nullopt};
    try {
      return {p, forge_3x3(p)};
    } catch (const DomainError&) {
    }
  }
}

// A = B C with integer factors in [-box, box], redrawn until rank r.
inline RatMatrix sample_rank_r(std::size_t m, std::size_t r, std::int64_t box, std::uint64_t seed) {
  if (r > m) throw DimensionError("rank r exceeds m");
  if (r == 0) return RatMatrix(m, m);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> dist(-box, box);
  while (true) {
    RatMatrix b(m, r), c(r, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < r; ++j) b(i, j) = dist(rng);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < m; ++j) c(i, j) = dist(rng);
    RatMatrix a = b * c;
    if (rank(a) == r) return a;
  }
}

namespace detail {

// Invertible P with first column all ones.
inline RatMatrix ones_first_basis(std::size_t m, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> dist(-2, 2);
  while (true) {
    RatMatrix p(m, m);
    for (std::size_t i = 0; i < m; ++i) {
      p(i, 0) = 1;
      for (std::size_t j = 1; j < m; ++j) p(i, j) = dist(rng);
    }
    if (determinant(p) != 0) return p;
  }
}

inline RatMatrix conjugate_by(const RatMatrix& p, const RatMatrix& j) { return p * j * *inverse(p); }

}  // namespace detail

// Corank 1 with Ker(A) = span{1}: A = M - (M 1) 1^T / m for random integer
// M, redrawn until the rank is m - 1.
inline RatMatrix sample_ones_kernel(std::size_t m, std::mt19937_64& rng, std::int64_t box = 4) {
  std::uniform_int_distribution<std::int64_t> dist(-box, box);
  while (true) {
    RatMatrix a(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) a(i, j) = dist(rng);
    for (std::size_t i = 0; i < m; ++i) {
      Rational s = 0;
      for (std::size_t j = 0; j < m; ++j) s += a(i, j);
      for (std::size_t j = 0; j < m; ++j) a(i, j) -= s / Rational(static_cast<std::int64_t>(m));
    }
    if (rank(a) == m - 1) return a;
  }
}

// Ker(A) = span{1} and 1 in Im(A^2): A = P J P^{-1} with P e1 = 1 and J a
// nilpotent 3-block (plus an invertible diagonal tail).
inline RatMatrix sample_ones_kernel_nonproper(std::size_t m, std::mt19937_64& rng) {
  if (m < 3) throw DimensionError("need m >= 3");
  RatMatrix j(m, m);
  j(0, 1) = 1;
  j(1, 2) = 1;
  std::uniform_int_distribution<std::int64_t> dist(1, 3);
  for (std::size_t i = 3; i < m; ++i) j(i, i) = Rational(dist(rng) * (dist(rng) % 2 ? 1 : -1));
  return detail::conjugate_by(detail::ones_first_basis(m, rng), j);
}

// Ker(A) = span{1}, 1 in Im(A) but not in Im(A^2): nilpotent 2-block.
inline RatMatrix sample_ones_kernel_borderline(std::size_t m, std::mt19937_64& rng) {
  if (m < 2) throw DimensionError("need m >= 2");
  RatMatrix j(m, m);
  j(0, 1) = 1;
  std::uniform_int_distribution<std::int64_t> dist(1, 3);
  for (std::size_t i = 2; i < m; ++i) j(i, i) = Rational(dist(rng) * (dist(rng) % 2 ? 1 : -1));
  return detail::conjugate_by(detail::ones_first_basis(m, rng), j);
}

}  // namespace idc
