#pragma once

// Jacobian determinant of F_A, the Druzkowski test and the sign-pattern
// reduction.

#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "idcubic/certificate.hpp"
#include "idcubic/linalg.hpp"
#include "idcubic/multipoly.hpp"

namespace idc {

struct JacobianOptions {
  std::size_t exact_bound = 6;
  std::size_t max_terms = 2'000'000;
};

// JF_A(x) = I + k diag((Ax)^{k-1}) A, entries as polynomials.
inline std::vector<std::vector<MultiPoly>> jacobian_entries(const RatMatrix& a, unsigned k = 3) {
  if (a.rows() != a.cols()) throw DimensionError("matrix must be square");
  if (k == 0) throw DomainError("power k must be positive");
  const std::size_t m = a.rows();
  std::vector<std::vector<MultiPoly>> j(m, std::vector<MultiPoly>(m, MultiPoly(m)));
  for (std::size_t r = 0; r < m; ++r) {
    const MultiPoly lk = MultiPoly::linear(a.row(r)).pow(k - 1);
    for (std::size_t c = 0; c < m; ++c) {
      if (a(r, c) != 0) j[r][c] = (Rational(k) * a(r, c)) * lk;
      if (r == c) j[r][c] += MultiPoly::constant(m, Rational(1));
    }
  }
  return j;
}

// Expanded det JF_A(x). Laplace expansion memoized over column subsets.
inline MultiPoly jacobian_det(const RatMatrix& a, unsigned k = 3, const JacobianOptions& opt = {}) {
  const std::size_t m = a.rows();
  if (m > opt.exact_bound)
    throw DomainError("m = " + std::to_string(m) + " exceeds the exact expansion bound " +
                      std::to_string(opt.exact_bound) + "; use the randomized check");
  const auto j = jacobian_entries(a, k);
  const std::size_t full = std::size_t(1) << m;
  std::vector<MultiPoly> f(full, MultiPoly(m));
  f[0] = MultiPoly::constant(m, Rational(1));
  for (std::size_t mask = 1; mask < full; ++mask) {
    const std::size_t r = static_cast<std::size_t>(std::popcount(mask)) - 1;
    MultiPoly acc(m);
    for (std::size_t c = 0; c < m; ++c) {
      if (!(mask & (std::size_t(1) << c)) || j[r][c].is_zero()) continue;
      const std::size_t rest = mask & ~(std::size_t(1) << c);
      if (f[rest].is_zero()) continue;
      const int above = std::popcount(mask >> (c + 1));
      const MultiPoly term = j[r][c] * f[rest];
      if (above % 2) acc -= term;
      else acc += term;
    }
    if (acc.size() > opt.max_terms) throw DomainError("determinant expansion exceeded the term budget");
    f[mask] = std::move(acc);
  }
  return f[full - 1];
}

// JF_A at a rational point.
inline RatMatrix jacobian_at(const RatMatrix& a, const RatVector& x, unsigned k = 3) {
  const std::size_t m = a.rows();
  const RatVector ax = a * x;
  RatMatrix j = RatMatrix::identity(m);
  for (std::size_t r = 0; r < m; ++r) {
    const Rational s = Rational(k) * ipow(ax[r], k - 1);
    if (s == 0) continue;
    for (std::size_t c = 0; c < m; ++c) j(r, c) += s * a(r, c);
  }
  return j;
}

struct DruzkowskiOptions {
  std::size_t exact_bound = 6;
  std::size_t trials = 64;
  std::int64_t box = 1'000'000;
  std::uint64_t seed = 0;
  unsigned k = 3;
  bool force_randomized = false;
};

struct DruzkowskiEvidence {
  bool druzkowski = false;
  std::string mode;  // "exact" | "randomized"
  std::optional<MultiPoly> det;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::int64_t box = 0;
  std::optional<RatVector> failure_point;
  std::optional<Rational> failure_value;

  std::string summary() const {
    if (mode == "exact") return druzkowski ? "det JF_A = 1 (exact)" : "det JF_A = " + det->to_string();
    if (!druzkowski) return "det JF_A = " + to_string(*failure_value) + " at " + to_string(*failure_point);
    return "probably yes, " + std::to_string(trials) + " trials";
  }
};

inline DruzkowskiEvidence is_druzkowski(const RatMatrix& a, const DruzkowskiOptions& opt = {}) {
  DruzkowskiEvidence ev;
  ev.seed = opt.seed;
  const std::size_t m = a.rows();
  if (!opt.force_randomized && m <= opt.exact_bound) {
    ev.mode = "exact";
    ev.det = jacobian_det(a, opt.k, {opt.exact_bound});
    ev.druzkowski = *ev.det == MultiPoly::constant(m, Rational(1));
    return ev;
  }
  // A nonzero polynomial of degree d vanishes at a random point of a box of
  // side N with probability at most d/N.
  ev.mode = "randomized";
  ev.box = opt.box;
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::int64_t> dist(-opt.box, opt.box);
  for (std::size_t t = 0; t < opt.trials; ++t) {
    RatVector x(m);
    for (auto& xi : x) xi = Rational(dist(rng));
    const Rational d = determinant(jacobian_at(a, x, opt.k));
    ++ev.trials;
    if (d != 1) {
      ev.failure_point = x;
      ev.failure_value = d;
      ev.druzkowski = false;
      return ev;
    }
  }
  ev.druzkowski = true;
  return ev;
}

struct SignPattern {
  std::vector<int> delta;
  int global_sign = 1;
};

namespace detail {

// Union-find carrying the parity of each node relative to its root.
class ParityUnionFind {
 public:
  explicit ParityUnionFind(std::size_t n) : parent_(n), parity_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::pair<std::size_t, int> find(std::size_t x) {
    int p = 0;
    std::size_t r = x;
    while (parent_[r] != r) {
      p ^= parity_[r];
      r = parent_[r];
    }
    // path compression
    int acc = p;
    while (parent_[x] != x) {
      const std::size_t next = parent_[x];
      const int px = parity_[x];
      parent_[x] = r;
      parity_[x] = acc;
      acc ^= px;
      x = next;
    }
    return {r, p};
  }
  // Impose parity(x) xor parity(y) == d; false on contradiction.
  bool unite(std::size_t x, std::size_t y, int d) {
    auto [rx, px] = find(x);
    auto [ry, py] = find(y);
    if (rx == ry) return (px ^ py) == d;
    parent_[rx] = ry;
    parity_[rx] = px ^ py ^ d;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> parity_;
};

}  // namespace detail

// delta with sign(a_ij) = s delta_i delta_j on every nonzero entry.
inline std::optional<SignPattern> find_sign_pattern(const RatMatrix& a) {
  const std::size_t m = a.rows();
  for (int s : {1, -1}) {
    detail::ParityUnionFind uf(m);
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i)
      for (std::size_t j = 0; j < m && ok; ++j) {
        if (a(i, j) == 0) continue;
        // delta_i delta_j = s sign(a_ij); parity 1 encodes -1
        const int want = s * sign(a(i, j));
        ok = uf.unite(i, j, want < 0 ? 1 : 0);
      }
    if (!ok) continue;
    SignPattern sp;
    sp.global_sign = s;
    sp.delta.resize(m);
    for (std::size_t i = 0; i < m; ++i) sp.delta[i] = uf.find(i).second ? -1 : 1;
    return sp;
  }
  return std::nullopt;
}

inline bool satisfies_sign_pattern(const RatMatrix& a, const SignPattern& sp) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0 && sign(a(i, j)) != sp.global_sign * sp.delta[i] * sp.delta[j]) return false;
  return true;
}

enum class Invertibility { Invertible, NotInvertible, Undetermined };

inline std::string to_string(Invertibility v) {
  switch (v) {
    case Invertibility::Invertible: return "invertible (via Hadamard)";
    case Invertibility::NotInvertible: return "not invertible";
    case Invertibility::Undetermined: return "undetermined";
  }
  return "?";
}

// A proper C^1 map with nowhere-zero Jacobian is a diffeomorphism; a
// non-proper one is never a homeomorphism.
inline Invertibility invertibility_verdict(const RatMatrix& a, const Certificate& properness,
                                           bool assert_nonzero_jacobian = false,
                                           const DruzkowskiOptions& opt = {}) {
  if (properness.verdict == Verdict::NonProper) return Invertibility::NotInvertible;
  if (properness.verdict != Verdict::Proper) return Invertibility::Undetermined;
  if (assert_nonzero_jacobian) return Invertibility::Invertible;
  const auto ev = is_druzkowski(a, opt);
  return ev.druzkowski ? Invertibility::Invertible : Invertibility::Undetermined;
}

// Informational notes for a certificate; never a properness verdict.
inline std::vector<std::string> jacobian_notes(const RatMatrix& a, const DruzkowskiOptions& opt = {}) {
  std::vector<std::string> notes;
  const auto ev = is_druzkowski(a, opt);
  notes.push_back(std::string("druzkowski: ") + (ev.druzkowski ? "yes" : "no") + " (" + ev.summary() + ")");
  if (ev.druzkowski && find_sign_pattern(a))
    notes.push_back("sign pattern found: the Jacobian conjecture holds for this map");
  return notes;
}

}  // namespace idc
