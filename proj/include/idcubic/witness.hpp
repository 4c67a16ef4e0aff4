#pragma once

// Explicit escape sequences x(g) with |x(g)| -> infinity and F^_A(x(g))
// bounded, their exact invariant checks and numeric validation.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "idcubic/certificate.hpp"
#include "idcubic/hadamard.hpp"
#include "idcubic/linalg.hpp"

namespace idc {

// x(g) = sum over terms of g^exponent * w
template <class T>
struct WitnessTerm {
  Rational exponent;
  BasicVector<T> w;
};

namespace detail {

template <class T>
BasicVector<T> restrict_to(const BasicVector<T>& v, const std::vector<std::size_t>& idx) {
  BasicVector<T> r(v.size(), T(0));
  for (auto i : idx) r[i] = v[i];
  return r;
}

template <class T>
std::vector<std::size_t> support_of(const BasicVector<T>& v, const T& scale) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!ScalarTraits<T>::negligible(v[i], scale)) s.push_back(i);
  return s;
}

template <class T>
T vec_scale(const BasicVector<T>& v);

template <class T>
std::vector<std::size_t> support_of(const BasicVector<T>& v) {
  return support_of(v, vec_scale(v));
}

template <class T>
T vec_scale(const BasicVector<T>& v) {
  T s = T(0);
  for (const auto& x : v) s = std::max<T>(s, ScalarTraits<T>::magnitude(x));
  return s;
}

template <class T>
bool negligible_vec(const BasicVector<T>& v, const T& scale) {
  for (const auto& x : v)
    if (!ScalarTraits<T>::negligible(x, scale)) return false;
  return true;
}

// x^{-2} on the block, zero elsewhere
template <class T>
BasicVector<T> block_inv_sq(const BasicVector<T>& t, const std::vector<std::size_t>& block) {
  BasicVector<T> r(t.size(), T(0));
  for (auto i : block) r[i] = T(1) / (t[i] * t[i]);
  return r;
}

inline Rational pow3_neg(std::size_t j) {
  BigInt d = 1;
  for (std::size_t i = 0; i < j; ++i) d *= 3;
  return Rational(BigInt(1), d);
}

}  // namespace detail

template <class T>
std::vector<WitnessTerm<T>> witness_terms(const BasicRecipe<T>& r) {
  std::vector<WitnessTerm<T>> terms;
  switch (r.kind) {
    case RecipeKind::Linear:
      terms.push_back({Rational(1), r.x_inf});
      break;
    case RecipeKind::Simple: {
      if (r.k < 2) throw DomainError("Simple recipe needs k >= 2");
      for (const auto& x : r.x_inf)
        if (x == 0) throw DomainError("Simple recipe needs all x_inf coordinates nonzero");
      if (is_zero_vector(r.u)) throw DomainError("u = 0 cannot satisfy A u + x_inf = 0 for x_inf != 0");
      // x^k = g^k x_inf^k + g u + O(g^{2-k})
      terms.push_back({Rational(1), r.x_inf});
      terms.push_back({Rational(2 - static_cast<int>(r.k)),
                       scaled(T(1) / T(r.k), hprod(r.u, hinv_pow(r.x_inf, r.k - 1)))});
      break;
    }
    case RecipeKind::CorankChain: {
      if (r.k != 3) throw DomainError("chain recipes are defined for k = 3 only");
      if (r.stages.empty()) throw DomainError("chain recipe without stages");
      const std::size_t J = r.stages.size();
      for (std::size_t i = 0; i < J; ++i) terms.push_back({detail::pow3_neg(i), r.stages[i].t});
      for (std::size_t i = 0; i < J; ++i) {
        const auto& st = r.stages[i];
        const auto inv2 = detail::block_inv_sq(st.t, st.block);
        for (std::size_t j = i; j < J; ++j) {
          BasicVector<T> q;
          if (i == 0 && j < r.lead_reps.size()) q = r.lead_reps[j];
          else q = hprod(detail::restrict_to(r.stages[j].u, st.block), inv2);
          terms.push_back({detail::pow3_neg(j) - 2 * detail::pow3_neg(i), scaled(T(1) / T(3), q)});
        }
      }
      break;
    }
  }
  return terms;
}

namespace detail {

inline Real real_pow(const Real& g, const Rational& e) {
  if (e == 1) return g;
  if (e == 0) return Real(1);
  return boost::multiprecision::pow(g, to_real(e));
}

template <class T>
RealVector as_real(const BasicVector<T>& v) {
  if constexpr (std::is_same_v<T, Real>) return v;
  else return to_real(v);
}

}  // namespace detail

template <class T>
RealVector build_witness_point_real(const BasicRecipe<T>& r, const Real& gamma) {
  if (!(gamma > 0)) throw DomainError("gamma must be positive");
  const auto terms = witness_terms(r);
  RealVector x(r.x_inf.size(), Real(0));
  for (const auto& t : terms) {
    const Real s = detail::real_pow(gamma, t.exponent);
    const RealVector w = detail::as_real(t.w);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += s * w[i];
  }
  return x;
}

template <class T>
FloatVector build_witness_point(const BasicRecipe<T>& r, double gamma) {
  return to_double(build_witness_point_real(r, Real(gamma)));
}

// Exact (or tolerance-based for Real) check of the recipe equations.
// Returns the first failing equation.
template <class T>
std::optional<std::string> check_recipe(const BasicMatrix<T>& a, const BasicRecipe<T>& r) {
  using detail::negligible_vec;
  const std::size_t m = a.rows();
  if (r.x_inf.size() != m || (!r.u.empty() && r.u.size() != m)) return "recipe vectors have the wrong length";
  if (is_zero_vector(r.x_inf)) return "x_inf = 0";
  auto near_zero = [&](const BasicVector<T>& v, const BasicVector<T>& ref) {
    T sc = std::max<T>(detail::vec_scale(ref), T(1)) * std::max<T>(matrix_scale(a), T(1));
    return negligible_vec(v, sc);
  };
  switch (r.kind) {
    case RecipeKind::Linear: {
      if (r.k != 1) return "Linear recipe requires k = 1";
      if (!near_zero(r.x_inf + a * r.x_inf, r.x_inf)) return "(I + A) x_inf = 0 fails";
      return std::nullopt;
    }
    case RecipeKind::Simple: {
      if (r.k < 2) return "Simple recipe requires k >= 2";
      for (const auto& x : r.x_inf)
        if (x == 0) return "x_inf has a zero coordinate";
      const auto xk = hpow(r.x_inf, r.k);
      if (!near_zero(a * xk, xk)) return "A(x_inf^" + std::to_string(r.k) + ") = 0 fails";
      if (!near_zero(a * r.u + r.x_inf, r.x_inf)) return "A u + x_inf = 0 fails";
      return std::nullopt;
    }
    case RecipeKind::CorankChain: {
      if (r.k != 3) return "chain recipe requires k = 3";
      if (r.stages.empty()) return "chain recipe has no stages";
      const auto s0 = detail::support_of(r.x_inf);
      if (r.stages[0].block != s0) return "stage 0 block is not the support of x_inf";
      if (!near_zero(r.stages[0].t - r.x_inf, r.x_inf)) return "stage 0 target differs from x_inf";
      const auto x3 = hpow(r.x_inf, 3);
      if (!near_zero(a * x3, x3)) return "A(x_inf^3) = 0 fails";
      std::vector<bool> used(m, false);
      for (auto i : s0) used[i] = true;
      for (std::size_t j = 0; j < r.stages.size(); ++j) {
        const auto& st = r.stages[j];
        if (st.u.size() != m || st.t.size() != m) return "stage vectors have the wrong length";
        if (!near_zero(a * st.u + st.t, st.t)) return "A u_" + std::to_string(j) + " + t_" + std::to_string(j) + " = 0 fails";
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < m; ++i)
          if (!used[i]) rest.push_back(i);
        const auto rem = detail::restrict_to(st.u, rest);
        const T sc = std::max<T>(detail::vec_scale(st.u), T(1));
        if (j + 1 == r.stages.size()) {
          if (!negligible_vec(rem, sc)) return "last stage leaves a nonzero remainder";
        } else {
          const auto& nx = r.stages[j + 1];
          if (nx.block != detail::support_of(rem, sc)) return "stage " + std::to_string(j + 1) + " block mismatch";
          const auto t3 = hpow(nx.t, 3);
          if (!negligible_vec(t3 - rem, sc)) return "t_" + std::to_string(j + 1) + "^3 differs from the remainder";
          for (auto i : nx.block) used[i] = true;
        }
      }
      const auto inv2 = detail::block_inv_sq(r.x_inf, s0);
      for (std::size_t j = 0; j < r.lead_reps.size() && j < r.stages.size(); ++j) {
        const auto want = detail::restrict_to(hprod(r.stages[j].u, inv2), s0);
        const auto got = detail::restrict_to(r.lead_reps[j], s0);
        if (!negligible_vec(want - got, std::max<T>(detail::vec_scale(want), T(1))))
          return "representative " + std::to_string(j) + " does not match pr(u_" + std::to_string(j) + " * x_inf^-2)";
      }
      return std::nullopt;
    }
  }
  return "unknown recipe kind";
}

inline std::optional<std::string> check_recipe(const RatMatrix& a, const NumericRecipe& r) {
  return check_recipe(to_real(a), r);
}

// M with A M b = b for every b in Im(A).
inline RatMatrix right_inverse_on_image(const RatMatrix& a) {
  const std::size_t m = a.rows();
  const auto row_space = image_basis(a.transpose());
  if (row_space.dim() == 0) return RatMatrix(m, m);
  const RatMatrix c = row_space.as_columns();
  const RatMatrix ac = a * c;
  const auto g = inverse(ac.transpose() * ac);
  return c * (*g * ac.transpose());
}

struct WitnessValidationOptions {
  bool check_invariants = true;
  double slope_threshold = -0.2;
  double margin = 2.0;
};

struct WitnessValidationReport {
  std::vector<double> gamma_schedule;
  std::vector<double> norms;
  std::vector<double> residuals;
  std::vector<double> direction_errors;
  std::vector<double> fa_norms;
  std::vector<double> fa_residuals;
  double fitted_decay_exponent = 0;
  bool norms_increasing = false;
  bool directions_converging = false;
  bool residuals_controlled = false;
  bool passed = false;
  bool rejected = false;
  std::string failure;
  std::vector<std::string> flags;
};

inline std::vector<double> default_schedule() { return {1e1, 1e2, 1e3, 1e4, 1e5, 1e6}; }

inline double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double den = n * sxx - sx * sx;
  return den == 0 ? 0.0 : (n * sxy - sx * sy) / den;
}

template <class T>
WitnessValidationReport validate_witness(const RatMatrix& a, const BasicRecipe<T>& recipe,
                                         const std::vector<double>& schedule = default_schedule(),
                                         const WitnessValidationOptions& opt = {}) {
  WitnessValidationReport rep;
  rep.gamma_schedule = schedule;
  try {
    if (schedule.size() < 2) throw DomainError("schedule needs at least two points");
    for (std::size_t i = 1; i < schedule.size(); ++i)
      if (!(schedule[i] > schedule[i - 1])) throw DomainError("schedule must be strictly increasing");
    if (opt.check_invariants) {
      if (auto bad = check_recipe(a, recipe)) throw DomainError("recipe rejected: " + *bad);
    }
    const unsigned k = recipe.k;
    const RealMatrix ar = to_real(a);
    const RealMatrix lift = to_real(right_inverse_on_image(a));
    const RealVector xi = detail::as_real(recipe.x_inf);
    const Real xin = norm2(xi);
    bool negative = false;
    if (k % 2 == 0)
      for (const auto& c : xi)
        if (c < 0) negative = true;
    for (double g : schedule) {
      const RealVector x = build_witness_point_real(recipe, Real(g));
      const Real xn = norm2(x);
      RealVector dir = x;
      for (std::size_t i = 0; i < x.size(); ++i) dir[i] = x[i] / xn - xi[i] / xin;
      const RealVector fhat = eval_FA_hat(ar, x, k);
      // z = M F^(x) - x^k satisfies A z = x when x lies in Im(A); then F_A(z) = M F^(x).
      const RealVector z = lift * fhat - hpow(x, k);
      const RealVector fa = eval_FA(ar, z, k);
      rep.norms.push_back(static_cast<double>(xn));
      rep.residuals.push_back(static_cast<double>(norm2(fhat)));
      rep.direction_errors.push_back(static_cast<double>(norm2(dir)));
      rep.fa_norms.push_back(static_cast<double>(norm2(z)));
      rep.fa_residuals.push_back(static_cast<double>(norm2(fa)));
      if (k % 2 == 0)
        for (const auto& c : x)
          if (c < 0) negative = true;
    }
    if (negative) rep.flags.push_back("even-root obstruction");
  } catch (const std::exception& e) {
    rep.rejected = true;
    rep.failure = e.what();
    return rep;
  }
  rep.norms_increasing = true;
  rep.directions_converging = true;
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (!(rep.norms[i] > rep.norms[i - 1])) rep.norms_increasing = false;
    if (rep.direction_errors[i] > rep.direction_errors[i - 1] * (1 + 1e-9) + 1e-30) rep.directions_converging = false;
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    lx.push_back(std::log(schedule[i]));
    ly.push_back(std::log(std::max(rep.residuals[i], 1e-300)));
  }
  rep.fitted_decay_exponent = fit_slope(lx, ly);
  const double ref = std::max(rep.residuals[0], rep.residuals[1]);
  bool bounded = true;
  for (double r : rep.residuals)
    if (!std::isfinite(r) || r > opt.margin * ref + 1e-30) bounded = false;
  rep.residuals_controlled = rep.fitted_decay_exponent <= opt.slope_threshold || bounded;
  rep.passed = rep.norms_increasing && rep.directions_converging && rep.residuals_controlled;
  if (!rep.passed) {
    if (!rep.norms_increasing) rep.failure = "norms are not increasing";
    else if (!rep.directions_converging) rep.failure = "direction errors are not decreasing";
    else rep.failure = "residual grows along the schedule";
  }
  return rep;
}

// Simple recipe for x + A(x^k), k >= 2.
inline WitnessRecipe general_k_witness(const RatMatrix& a, const RatVector& x_inf, const RatVector& u, unsigned k) {
  if (k < 2) throw DomainError("k = 1 is decided exactly by k1_properness");
  WitnessRecipe r;
  r.kind = RecipeKind::Simple;
  r.k = k;
  r.x_inf = x_inf;
  r.u = u;
  if (auto bad = check_recipe(a, r)) throw DomainError(*bad);
  return r;
}

// x + Ax = (I + A)x is proper iff I + A is invertible.
inline Certificate k1_properness(const RatMatrix& a) {
  const RatMatrix ia = RatMatrix::identity(a.rows()) + a;
  const Rational det = determinant(ia);
  Certificate c;
  c.reason = "k1";
  c.evidence.values["det(I+A)"] = to_string(det);
  c.record("det(I + A) != 0", det != 0, to_string(det));
  if (det != 0) {
    c.verdict = Verdict::Proper;
    return c;
  }
  c.verdict = Verdict::NonProper;
  WitnessRecipe r;
  r.kind = RecipeKind::Linear;
  r.k = 1;
  r.x_inf = kernel_basis(ia).basis().front();
  r.u = RatVector(a.rows(), Rational(0));
  c.evidence.vectors["x_inf"] = r.x_inf;
  c.evidence.recipe = r;
  return c;
}

}  // namespace idc
