#pragma once

// Limit directions x_inf with x_inf^3 in Ker(A) and the condition sets
// N(x_inf), S(x_inf, V) evaluated as a staged chain.

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "idcubic/certificate.hpp"
#include "idcubic/hadamard.hpp"
#include "idcubic/linalg.hpp"
#include "idcubic/witness.hpp"

namespace idc {

// Coordinates of g grouped by i ~ j iff g_i / g_j is a rational cube.
// Cube roots of representatives of distinct classes are linearly
// independent over Q.
struct CubeRootClasses {
  std::vector<std::size_t> support;
  std::vector<int> cls;             // -1 off the support
  std::vector<std::size_t> reps;    // representative coordinate per class
  RatVector ratio;                  // (g_i / g_rep)^{1/3}, 0 off the support

  bool rational() const { return reps.size() <= 1; }
};

inline CubeRootClasses cube_root_classes(const RatVector& g) {
  CubeRootClasses c;
  c.cls.assign(g.size(), -1);
  c.ratio.assign(g.size(), Rational(0));
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] == 0) continue;
    c.support.push_back(i);
    for (std::size_t k = 0; k < c.reps.size(); ++k) {
      if (auto r = exact_root(g[i] / g[c.reps[k]], 3)) {
        c.cls[i] = static_cast<int>(k);
        c.ratio[i] = *r;
        break;
      }
    }
    if (c.cls[i] < 0) {
      c.cls[i] = static_cast<int>(c.reps.size());
      c.reps.push_back(i);
      c.ratio[i] = 1;
    }
  }
  return c;
}

// A rational vector proportional to g^{1/3}, if one exists.
inline std::optional<RatVector> rational_cube_root_direction(const RatVector& g) {
  const auto c = cube_root_classes(g);
  if (c.reps.empty() || !c.rational()) return std::nullopt;
  RatVector x = c.ratio;
  if (g[c.reps[0]] < 0)
    for (auto& e : x) e = -e;
  return x;
}

// g^{1/3} (sign-preserving) in 50-digit arithmetic.
inline RealVector real_cube_root_direction(const RatVector& g) { return hroot_odd(to_real(g), 3); }

// Whether g^{1/3} lies in span{rows}^perp, i.e. n . g^{1/3} = 0 for every
// given row n, decided exactly class by class.
inline bool cube_root_orthogonal_to(const RatVector& g, const std::vector<RatVector>& rows) {
  const auto c = cube_root_classes(g);
  for (const auto& n : rows)
    for (std::size_t k = 0; k < c.reps.size(); ++k) {
      Rational s = 0;
      for (auto i : c.support)
        if (c.cls[i] == static_cast<int>(k)) s += n[i] * c.ratio[i];
      if (s != 0) return false;
    }
  return true;
}

template <class T>
std::vector<BasicVector<T>> orthogonal_complement_rows(const BasicSubspace<T>& s) {
  if (s.dim() == 0) return BasicSubspace<T>::full(s.ambient_dim()).basis();
  return kernel_basis(BasicMatrix<T>::from_rows(s.basis())).basis();
}

// g^{1/3} in V, exactly.
inline bool cube_root_in(const RatVector& g, const Subspace& v) {
  return cube_root_orthogonal_to(g, orthogonal_complement_rows(v));
}

// g^{1/3} = sum_c rho_c w_c with rho_c = g_rep(c)^{1/3} and rational w_c.
inline std::vector<RatVector> cube_root_components(const CubeRootClasses& c, std::size_t m) {
  std::vector<RatVector> w(c.reps.size(), RatVector(m, Rational(0)));
  for (auto i : c.support) w[static_cast<std::size_t>(c.cls[i])][i] = c.ratio[i];
  return w;
}

// For u = sum_c rho_c u_c: whether n . (u * g^{-2/3}) = 0 on the support of g
// for every row n. On class d, x_i^{-2} = rho_d / (g_rep(d) ratio_i^2), so the
// terms carry the irrationals (g_rep(c) g_rep(d))^{1/3}, grouped by class.
inline bool scaled_combination_orthogonal_to(const RatVector& g, const std::vector<RatVector>& u,
                                             const std::vector<RatVector>& rows) {
  const auto c = cube_root_classes(g);
  const std::size_t nc = c.reps.size();
  RatVector prod;
  for (std::size_t a = 0; a < nc; ++a)
    for (std::size_t d = 0; d < nc; ++d) prod.push_back(g[c.reps[a]] * g[c.reps[d]]);
  const auto pc = cube_root_classes(prod);
  for (const auto& n : rows) {
    RatVector coef(pc.reps.size(), Rational(0));
    for (std::size_t a = 0; a < nc; ++a)
      for (std::size_t d = 0; d < nc; ++d) {
        Rational s = 0;
        for (auto i : c.support)
          if (c.cls[i] == static_cast<int>(d)) s += n[i] * u[a][i] / (c.ratio[i] * c.ratio[i]);
        const std::size_t q = a * nc + d;
        coef[static_cast<std::size_t>(pc.cls[q])] += pc.ratio[q] * s / g[c.reps[d]];
      }
    if (!std::all_of(coef.begin(), coef.end(), [](const Rational& x) { return x == 0; })) return false;
  }
  return true;
}

struct DirectionProfile {
  RatVector x_inf;
  std::vector<std::size_t> support;
  bool normalized = false;
};

inline DirectionProfile make_direction(const RatVector& x) {
  if (is_zero_vector(x)) throw DomainError("direction must be nonzero");
  DirectionProfile d;
  d.x_inf = x;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0) d.support.push_back(i);
  d.normalized = true;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != (i < d.support.size() ? 1 : 0)) d.normalized = false;
  return d;
}

// B = P D A D^{-3} P^T has kernel generator (1,...,1,0,...,0).
struct KernelNormalization {
  RatMatrix b;
  std::vector<std::size_t> perm;  // new coordinate p is old coordinate perm[p]
  RatVector d;
  RatVector generator;
};

inline KernelNormalization normalize_kernel_direction(const RatMatrix& a, const RatVector& g) {
  if (g.size() != a.cols()) throw DimensionError("generator length differs from matrix size");
  if (is_zero_vector(g)) throw DomainError("kernel generator must be nonzero");
  if (!is_zero_vector(a * g)) throw DomainError("g is not in Ker(A)");
  const std::size_t m = g.size();
  KernelNormalization n;
  n.d.assign(m, Rational(1));
  for (std::size_t i = 0; i < m; ++i) {
    if (g[i] == 0) continue;
    auto r = exact_root(g[i], 3);
    if (!r) throw DomainError("coordinate " + std::to_string(i) + " of g is not a rational cube; use float mode");
    n.d[i] = 1 / *r;
  }
  for (std::size_t i = 0; i < m; ++i)
    if (g[i] != 0) n.perm.push_back(i);
  for (std::size_t i = 0; i < m; ++i)
    if (g[i] == 0) n.perm.push_back(i);
  const RatMatrix c = RatMatrix::diagonal(n.d) * a * RatMatrix::diagonal(hinv_pow(n.d, 3));
  n.b = RatMatrix(m, m);
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q) n.b(p, q) = c(n.perm[p], n.perm[q]);
  n.generator.assign(m, Rational(0));
  for (std::size_t p = 0; p < m; ++p)
    if (g[n.perm[p]] != 0) n.generator[p] = 1;
  return n;
}

enum class ConditionMode { N, S };

inline std::string to_string(ConditionMode m) { return m == ConditionMode::N ? "N" : "S"; }

template <class T>
struct ChainResult {
  bool satisfied = false;
  bool definitive = true;    // false when another Ker(A) choice could change the outcome
  bool irrational = false;   // exact run needed an irrational cube root
  bool extrapolated = false; // mode S memberships at stages >= 2
  std::size_t stage_reached = 0;
  std::string failure;
  BasicRecipe<T> recipe;
};

namespace detail {

inline std::optional<RatVector> cube_root_vec(const RatVector& v) { return try_hroot(v, 3); }
inline std::optional<RealVector> cube_root_vec(const RealVector& v) { return hroot_odd(v, 3); }

template <class T>
bool all_negligible(const BasicVector<T>& v, const T& scale) {
  return std::all_of(v.begin(), v.end(), [&](const T& x) { return ScalarTraits<T>::negligible(x, scale); });
}

// Normals (as length-m rows supported on `block`) of the complement of
// pr_block(V) inside R^block.
template <class T>
std::vector<BasicVector<T>> projected_complement_rows(const BasicSubspace<T>& v, const std::vector<std::size_t>& block) {
  const std::size_t m = v.ambient_dim(), s = block.size();
  std::vector<BasicVector<T>> proj;
  for (const auto& b : v.basis()) {
    BasicVector<T> p(s);
    for (std::size_t i = 0; i < s; ++i) p[i] = b[block[i]];
    proj.push_back(std::move(p));
  }
  const auto ps = BasicSubspace<T>::span(s, proj);
  std::vector<BasicVector<T>> rows;
  for (const auto& n : orthogonal_complement_rows(ps)) {
    BasicVector<T> r(m, T(0));
    for (std::size_t i = 0; i < s; ++i) r[block[i]] = n[i];
    rows.push_back(std::move(r));
  }
  return rows;
}

template <class T>
bool kernel_vanishes_off(const BasicMatrix<T>& a, const std::vector<std::size_t>& block) {
  std::vector<bool> in(a.cols(), false);
  for (auto i : block) in[i] = true;
  const auto ker = kernel_basis(a);
  for (const auto& k : ker.basis()) {
    const T sc = vec_scale(k);
    for (std::size_t i = 0; i < k.size(); ++i)
      if (!in[i] && !ScalarTraits<T>::negligible(k[i], sc)) return false;
  }
  return true;
}

}  // namespace detail

// Stage j solves A u_j = -t_j. The part r_j of u_j on coordinates not yet
// used becomes the next target t_{j+1} = r_j^{1/3} on N_{j+1} = supp(r_j);
// the chain closes when r_j = 0. Mode S additionally keeps every witness
// term vector in V (the stage-0 correction only up to its projection on
// supp(x_inf), through a V-representative). Mode N prefers the S-admissible
// solution when V is given, so S satisfied implies N satisfied.
template <class T>
ChainResult<T> run_chain(const BasicMatrix<T>& a, const BasicVector<T>& x_inf, const BasicSubspace<T>* v,
                         ConditionMode mode) {
  const std::size_t m = a.rows();
  if (x_inf.size() != m) throw DimensionError("direction length differs from matrix size");
  if (mode == ConditionMode::S && !v) throw DomainError("mode S needs a subspace V");
  ChainResult<T> res;
  auto& rec = res.recipe;
  rec.kind = RecipeKind::CorankChain;
  rec.k = 3;
  rec.x_inf = x_inf;
  rec.u = BasicVector<T>(m, T(0));
  const T xs = std::max<T>(detail::vec_scale(x_inf), T(1));
  const auto s0 = detail::support_of(x_inf, xs);
  if (s0.empty()) throw DomainError("direction must be nonzero");
  const T as = std::max<T>(matrix_scale(a), T(1));
  const auto x3 = hpow(x_inf, 3);
  if (!detail::all_negligible(BasicVector<T>(a * x3), T(as * xs * xs * xs))) {
    res.failure = "A(x_inf^3) != 0";
    return res;
  }
  const bool unique_tail = detail::kernel_vanishes_off(a, s0);
  std::vector<BasicVector<T>> s0_rows, vperp;
  if (v) {
    if (mode == ConditionMode::S && !v->contains(x_inf)) {
      res.failure = "x_inf not in V";
      return res;
    }
    s0_rows = detail::projected_complement_rows(*v, s0);
    vperp = orthogonal_complement_rows(*v);
  }
  std::vector<bool> used(m, false);
  for (auto i : s0) used[i] = true;
  rec.stages.push_back({s0, x_inf, {}});
  const auto inv0 = detail::block_inv_sq(x_inf, s0);

  for (std::size_t j = 0; j < m; ++j) {
    res.stage_reached = j;
    auto& st = rec.stages[j];
    std::optional<BasicVector<T>> u;
    if (v) {
      // rows c with c . u = 0 encode the V-memberships of the corrections
      std::vector<BasicVector<T>> rows;
      for (const auto& n : s0_rows) rows.push_back(hprod(n, inv0));
      for (std::size_t i = 1; i <= j; ++i) {
        const auto inv = detail::block_inv_sq(rec.stages[i].t, rec.stages[i].block);
        for (const auto& n : vperp) rows.push_back(hprod(n, inv));
      }
      const auto w = rows.empty() ? BasicSubspace<T>::full(m)
                                  : kernel_basis(BasicMatrix<T>::from_rows(rows));
      u = solve_affine_in_subspace(a, scaled(T(-1), st.t), w);
      if (!u && mode == ConditionMode::S) {
        res.failure = "stage " + std::to_string(j) + ": no admissible u with A u = -t";
        res.definitive = j == 0 || unique_tail;
        return res;
      }
      if (mode == ConditionMode::S && j >= 2) res.extrapolated = true;
    }
    if (!u) u = solve_linear(a, scaled(T(-1), st.t));
    if (!u) {
      res.failure = "stage " + std::to_string(j) + ": A u = -t is inconsistent";
      res.definitive = j == 0 || unique_tail;
      return res;
    }
    st.u = *u;
    if (j == 0) rec.u = *u;
    if (mode == ConditionMode::S) {
      // c in V with pr_{S0}(c) = pr_{S0}(u_j x_inf^-2)
      const auto target = hprod(*u, inv0);
      const auto bcols = v->as_columns();
      BasicMatrix<T> rows(s0.size(), bcols.cols());
      BasicVector<T> rhs(s0.size());
      for (std::size_t i = 0; i < s0.size(); ++i) {
        for (std::size_t c = 0; c < bcols.cols(); ++c) rows(i, c) = bcols(s0[i], c);
        rhs[i] = target[s0[i]];
      }
      const auto coef = solve_linear(rows, rhs);
      if (!coef) {
        res.failure = "stage " + std::to_string(j) + ": no V-representative of the leading correction";
        res.definitive = j == 0 || unique_tail;
        return res;
      }
      rec.lead_reps.push_back(bcols * *coef);
    }
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < m; ++i)
      if (!used[i]) rest.push_back(i);
    const T us = std::max<T>(detail::vec_scale(*u), T(1));
    const auto r = detail::restrict_to(*u, rest);
    const auto next = detail::support_of(r, us);
    if (next.empty()) {
      res.satisfied = true;
      return res;
    }
    auto root = detail::cube_root_vec(detail::restrict_to(r, next));
    if (!root) {
      res.irrational = true;
      res.failure = "stage " + std::to_string(j + 1) + " needs an irrational cube root";
      res.definitive = false;
      return res;
    }
    if (mode == ConditionMode::S && !v->contains(*root)) {
      res.failure = "stage " + std::to_string(j + 1) + ": target not in V";
      res.definitive = unique_tail;
      return res;
    }
    for (auto i : next) used[i] = true;
    rec.stages.push_back({next, *root, {}});
  }
  res.failure = "chain did not close";
  return res;
}

struct ConditionSetReport {
  ConditionMode kind = ConditionMode::N;
  RatVector x_inf;
  std::optional<Subspace> V;
  bool satisfied = false;
  bool numeric_only = false;
  bool definitive = true;
  bool extrapolated = false;
  std::size_t stages = 0;
  std::string failure;
  std::optional<WitnessRecipe> recipe;
  std::optional<NumericRecipe> numeric_recipe;
};

namespace detail {

template <class T>
void fill_report(ConditionSetReport& rep, const ChainResult<T>& r) {
  rep.satisfied = r.satisfied;
  rep.definitive = r.definitive;
  rep.extrapolated = r.extrapolated;
  rep.failure = r.failure;
  rep.stages = r.recipe.stages.size();
}

}  // namespace detail

// Exact evaluation; irrational cube roots drop the whole chain to 50-digit
// arithmetic and mark the report numeric-only.
inline ConditionSetReport condition_chain(const RatMatrix& a, const DirectionProfile& dir,
                                          const std::optional<Subspace>& v, ConditionMode mode) {
  ConditionSetReport rep;
  rep.kind = mode;
  rep.x_inf = dir.x_inf;
  rep.V = v;
  const auto exact = run_chain<Rational>(a, dir.x_inf, v ? &*v : nullptr, mode);
  if (!exact.irrational) {
    detail::fill_report(rep, exact);
    if (exact.satisfied) rep.recipe = exact.recipe;
    return rep;
  }
  rep.numeric_only = true;
  std::optional<RealSubspace> vr;
  if (v) vr = to_real(*v);
  const auto num = run_chain<Real>(to_real(a), to_real(dir.x_inf), vr ? &*vr : nullptr, mode);
  detail::fill_report(rep, num);
  if (num.satisfied) rep.numeric_recipe = num.recipe;
  return rep;
}

}  // namespace idc
