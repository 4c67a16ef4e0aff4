#pragma once

// Properness certificates for F_A(x) = x + (Ax)^3.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "idcubic/certificate.hpp"
#include "idcubic/chain.hpp"
#include "idcubic/hadamard.hpp"
#include "idcubic/linalg.hpp"
#include "idcubic/witness.hpp"

namespace idc {

// ---------------------------------------------------------------------------
// necessary condition: y = Ax in Im(A) with A(y^3) = 0, y != 0

enum class NecessaryStatus { Found, FoundNumeric, NoneExact, NoneIncomplete };

inline std::string to_string(NecessaryStatus s) {
  switch (s) {
    case NecessaryStatus::Found: return "found";
    case NecessaryStatus::FoundNumeric: return "found (numeric)";
    case NecessaryStatus::NoneExact: return "none (exhaustive)";
    case NecessaryStatus::NoneIncomplete: return "none found (search incomplete)";
  }
  return "?";
}

struct NecessarySearchOptions {
  std::uint64_t seed = 0;
  std::size_t float_restarts = 24;
  std::size_t float_iterations = 400;
  std::size_t max_combinations = 200'000;
};

struct NecessarySearch {
  NecessaryStatus status = NecessaryStatus::NoneIncomplete;
  bool complete = false;
  std::vector<RatVector> candidates;         // rational y, enumeration order
  std::vector<RatVector> irrational_kernel;  // w in Ker(A) with w^{1/3} in Im(A), irrational
  std::optional<RatVector> x;
  std::optional<RatVector> y;
  std::optional<FloatVector> x_numeric;
  std::string detail;
};

namespace detail {

inline RealVector real_of(const FloatVector& v) {
  RealVector r;
  for (double x : v) r.push_back(Real(x));
  return r;
}

inline std::int64_t coefficient_box(std::size_t dim) {
  if (dim <= 2) return 3;
  if (dim == 3) return 2;
  return 1;
}

// Integer coefficient vectors of [-b, b]^d \ {0}: L1 ascending, then
// lexicographic with +e before -e. Past `cap` combinations only vectors
// with at most two nonzero entries in {-1, 1} are kept.
inline std::vector<std::vector<std::int64_t>> coefficient_vectors(std::size_t d, std::int64_t b, std::size_t cap) {
  std::vector<std::vector<std::int64_t>> out;
  double total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= static_cast<double>(2 * b + 1);
  if (total <= static_cast<double>(cap)) {
    std::vector<std::int64_t> c(d, -b);
    while (true) {
      if (std::any_of(c.begin(), c.end(), [](auto x) { return x != 0; })) out.push_back(c);
      std::size_t i = 0;
      while (i < d && c[i] == b) c[i++] = -b;
      if (i == d) break;
      ++c[i];
    }
  } else {
    for (std::size_t i = 0; i < d; ++i)
      for (std::int64_t si : {1, -1}) {
        std::vector<std::int64_t> c(d, 0);
        c[i] = si;
        out.push_back(c);
        for (std::size_t j = i + 1; j < d; ++j)
          for (std::int64_t sj : {1, -1}) {
            auto e = c;
            e[j] = sj;
            out.push_back(e);
          }
      }
  }
  auto key = [](std::int64_t e) { return std::pair<std::int64_t, int>(e < 0 ? -e : e, e < 0 ? 1 : 0); };
  std::stable_sort(out.begin(), out.end(), [&](const auto& x, const auto& y) {
    std::int64_t lx = 0, ly = 0;
    for (auto e : x) lx += e < 0 ? -e : e;
    for (auto e : y) ly += e < 0 ? -e : e;
    if (lx != ly) return lx < ly;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] != y[i]) return key(x[i]) < key(y[i]);
    return false;
  });
  return out;
}

// Scale so the first nonzero coordinate is 1.
inline RatVector projective_normal_form(RatVector v) {
  for (const auto& e : v)
    if (e != 0) {
      const Rational s = e;
      for (auto& x : v) x /= s;
      break;
    }
  return v;
}

inline std::size_t nonzeros(const RatVector& v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](const Rational& x) { return x != 0; }));
}

// Orthonormal columns spanning the subspace, double precision.
inline std::vector<FloatVector> orthonormal_basis(const Subspace& s) {
  std::vector<FloatVector> q;
  for (const auto& b : s.basis()) {
    FloatVector v = to_double(b);
    for (const auto& e : q) {
      const double c = dot(v, e);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * e[i];
    }
    const double n = norm2(v);
    if (n < 1e-12) continue;
    for (auto& x : v) x /= n;
    q.push_back(std::move(v));
  }
  return q;
}

// min |A (y^3)|^2 over unit y in the span of q, projected gradient descent.
inline std::optional<FloatVector> float_cube_kernel_search(const RatMatrix& a, const std::vector<FloatVector>& q,
                                                           const NecessarySearchOptions& opt) {
  if (q.empty()) return std::nullopt;
  const FloatMatrix ad = to_double(a);
  const FloatMatrix at = ad.transpose();
  const std::size_t d = q.size(), m = a.rows();
  auto embed = [&](const FloatVector& c) {
    FloatVector y(m, 0.0);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < m; ++i) y[i] += c[j] * q[j][i];
    return y;
  };
  auto objective = [&](const FloatVector& c) {
    const FloatVector r = ad * hpow(embed(c), 3);
    return dot(r, r);
  };
  auto normalize = [](FloatVector& c) {
    const double n = norm2(c);
    for (auto& x : c) x /= n;
  };
  std::mt19937_64 rng(opt.seed ^ 0x6e63ULL);
  std::normal_distribution<double> gauss;
  const double scale = std::max(1.0, matrix_scale(ad));
  for (std::size_t r = 0; r < opt.float_restarts; ++r) {
    FloatVector c(d);
    for (auto& x : c) x = gauss(rng);
    if (norm2(c) == 0) continue;
    normalize(c);
    double f = objective(c), step = 0.1;
    for (std::size_t it = 0; it < opt.float_iterations && f > 1e-28 * scale * scale; ++it) {
      const FloatVector y = embed(c);
      const FloatVector res = ad * hpow(y, 3);
      FloatVector gy = hprod(scaled(6.0, hpow(y, 2)), at * res);
      FloatVector g(d);
      for (std::size_t j = 0; j < d; ++j) g[j] = dot(q[j], gy);
      const double radial = dot(g, c);
      for (std::size_t j = 0; j < d; ++j) g[j] -= radial * c[j];
      bool moved = false;
      for (int bt = 0; bt < 30; ++bt) {
        FloatVector trial = c;
        for (std::size_t j = 0; j < d; ++j) trial[j] -= step * g[j];
        normalize(trial);
        const double ft = objective(trial);
        if (ft < f) {
          c = trial;
          f = ft;
          step *= 1.5;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    if (f <= 1e-24 * scale * scale) return embed(c);
  }
  return std::nullopt;
}

}  // namespace detail

inline NecessarySearch necessary_condition_search(const RatMatrix& a, const NecessarySearchOptions& opt = {}) {
  NecessarySearch res;
  const std::size_t m = a.rows();
  const auto ker = kernel_basis(a);
  const auto im = image_basis(a);
  if (ker.dim() == 0 || im.dim() == 0) {
    res.status = NecessaryStatus::NoneExact;
    res.complete = true;
    res.detail = ker.dim() == 0 ? "Ker(A) = 0" : "A = 0";
    return res;
  }
  if (im.dim() == 1) {
    // V = span{b}: the only direction is b
    res.complete = true;
    const RatVector& b = im.basis().front();
    if (is_zero_vector(a * hpow(b, 3))) res.candidates.push_back(b);
  } else {
    res.complete = ker.dim() == 1;
    const auto coeffs = detail::coefficient_vectors(ker.dim(), detail::coefficient_box(ker.dim()), opt.max_combinations);
    std::set<RatVector> seen;
    for (const auto& c : coeffs) {
      RatVector w(m, Rational(0));
      for (std::size_t j = 0; j < c.size(); ++j)
        if (c[j]) w = w + scaled(Rational(c[j]), ker.basis()[j]);
      w = detail::projective_normal_form(w);
      if (!seen.insert(w).second) continue;
      if (auto y = rational_cube_root_direction(w)) {
        if (im.contains(*y)) res.candidates.push_back(*y);
      } else if (cube_root_in(w, im)) {
        res.irrational_kernel.push_back(w);
      }
    }
    std::stable_sort(res.candidates.begin(), res.candidates.end(),
                     [](const RatVector& x, const RatVector& y) { return detail::nonzeros(x) > detail::nonzeros(y); });
  }
  const auto row_space = image_basis(a.transpose());
  if (!res.candidates.empty()) {
    res.status = NecessaryStatus::Found;
    res.y = res.candidates.front();
    res.x = solve_affine_in_subspace(a, *res.y, row_space);
    res.detail = std::to_string(res.candidates.size()) + " rational candidate direction(s)";
    return res;
  }
  if (!res.irrational_kernel.empty()) {
    res.status = NecessaryStatus::FoundNumeric;
    const RealVector y = real_cube_root_direction(res.irrational_kernel.front());
    if (auto x = solve_affine_in_subspace(to_real(a), y, to_real(row_space))) res.x_numeric = to_double(*x);
    res.detail = "irrational cube-root direction";
    return res;
  }
  if (res.complete) {
    res.status = NecessaryStatus::NoneExact;
    res.detail = "no direction y in Im(A) with A(y^3) = 0";
    return res;
  }
  if (auto y = detail::float_cube_kernel_search(a, detail::orthonormal_basis(im), opt)) {
    res.status = NecessaryStatus::FoundNumeric;
    if (auto x = solve_affine_in_subspace(to_real(a), detail::real_of(*y), to_real(row_space))) res.x_numeric = to_double(*x);
    res.detail = "float search";
    return res;
  }
  res.status = NecessaryStatus::NoneIncomplete;
  res.detail = "kernel box and float search found nothing";
  return res;
}

inline std::optional<RatVector> necessary_condition_part1(const RatMatrix& a) {
  return necessary_condition_search(a).x;
}

// ---------------------------------------------------------------------------
// sufficient conditions

inline std::optional<FloatVector> zeta_falsifier(const RatMatrix& a, const RatVector& zeta, std::size_t samples = 2000,
                                                 std::uint64_t seed = 0) {
  if (zeta.size() != a.rows()) throw DimensionError("zeta has the wrong length");
  for (const auto& z : zeta)
    if (z <= 0) throw DomainError("zeta must have positive entries");
  const auto q = detail::orthonormal_basis(image_basis(a * a.transpose()));
  if (q.empty()) return std::nullopt;
  const FloatMatrix ad = to_double(a);
  const FloatVector zd = to_double(zeta);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<std::size_t> pick(0, q.size() - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    FloatVector x(a.rows(), 0.0);
    // a third of the samples sit on single basis directions
    if (s % 3 == 0) {
      x = q[pick(rng)];
    } else {
      for (const auto& e : q) {
        const double c = gauss(rng);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += c * e[i];
      }
    }
    const double n = norm2(x);
    if (n == 0) continue;
    for (auto& v : x) v /= n;
    const double val = dot(ad * hpow(x, 3), hprod(zd, x));
    if (val < -1e-12) return x;
  }
  return std::nullopt;
}

struct Thm1Options {
  std::optional<RatVector> zeta;
  std::size_t zeta_samples = 2000;
  std::uint64_t seed = 0;
};

inline bool thm1_cond1(const RatMatrix& a) {
  const RatMatrix aat = a * a.transpose();
  const auto ker = kernel_basis(a);
  return std::all_of(ker.basis().begin(), ker.basis().end(), [&](const RatVector& b) { return is_zero_vector(aat * b); });
}

inline bool thm1_cond2(const RatMatrix& a) { return rank(a * a.transpose()) == 1; }

inline bool thm1_cond3(const RatMatrix& a) { return is_upper_triangular(a) || is_lower_triangular(a); }

inline bool thm1_cond6(const RatMatrix& a) {
  const auto ker = kernel_basis(a);
  const RatVector one = ones<Rational>(a.rows());
  if (ker.dim() != 1 || !ker.contains(one)) return false;
  const RatMatrix aat = a * a.transpose();
  return !(image_basis(aat).contains(one) && image_basis(RatMatrix(a * aat)).contains(one));
}

// <A(x^3), zeta * x> >= 0 on Im(AA^T), decided exactly when that space has
// dimension <= 1.
inline std::optional<bool> thm1_cond5_exact(const RatMatrix& a, const RatVector& zeta) {
  const auto v = image_basis(a * a.transpose());
  if (v.dim() > 1) return std::nullopt;
  if (v.dim() == 0) return true;
  const RatVector& b = v.basis().front();
  return dot(RatVector(a * hpow(b, 3)), hprod(zeta, b)) >= 0;
}

inline Certificate check_thm1(const RatMatrix& a, const Thm1Options& opt = {}) {
  if (!a.is_square()) throw DimensionError("matrix must be square");
  Certificate c;
  auto take = [&](const char* reason, bool ok) {
    if (ok && c.verdict == Verdict::Undecided) {
      c.verdict = Verdict::Proper;
      c.reason = reason;
    }
  };
  const bool c1 = thm1_cond1(a);
  c.record("Thm1.1 Ker(A) in Ker(AA^T)", c1);
  take("Thm1.1", c1);
  const bool c2 = thm1_cond2(a);
  c.record("Thm1.2 rank(AA^T) = 1", c2);
  take("Thm1.2", c2);
  const bool c3 = thm1_cond3(a);
  c.record("Thm1.3 A triangular", c3);
  take("Thm1.3", c3);
  if (opt.zeta) {
    if (auto exact = thm1_cond5_exact(a, *opt.zeta)) {
      c.record("Thm1.5 <A(x^3), zeta*x> >= 0 on Im(AA^T)", *exact, "exact, dim Im(AA^T) <= 1");
      take("Thm1.5", *exact);
    } else if (auto bad = zeta_falsifier(a, *opt.zeta, opt.zeta_samples, opt.seed)) {
      c.record("Thm1.5 <A(x^3), zeta*x> >= 0 on Im(AA^T)", false, "violated by sampling");
    } else {
      c.record("Thm1.5 <A(x^3), zeta*x> >= 0 on Im(AA^T)", "inconclusive",
               "no violation in " + std::to_string(opt.zeta_samples) + " samples");
    }
  } else {
    c.record("Thm1.5 <A(x^3), zeta*x> >= 0 on Im(AA^T)", "skipped", "no zeta supplied");
  }
  const bool c6 = thm1_cond6(a);
  c.record("Thm1.6 Ker(A) = <1>, 1 not in Im(AA^T) & Im(AAA^T)", c6);
  take("Thm1.6", c6);
  if (c.verdict == Verdict::Proper && c.reason == "Thm1.1")
    c.evidence.bases["Ker(A)"] = kernel_basis(a).basis();
  return c;
}

// ---------------------------------------------------------------------------
// directional condition for an all-nonzero x_inf

struct DirectionCheck {
  bool holds = false;
  std::optional<RatVector> u;
  bool kernel_roots_in_v = false;  // hypothesis Ker(A)^{1/3} in V, on basis vectors
  std::string detail;
};

inline DirectionCheck check_thm2_direction(const RatMatrix& a, const Subspace& v, const RatVector& x_inf) {
  for (const auto& x : x_inf)
    if (x == 0) throw DomainError("x_inf has a zero coordinate; use corank-1/chain path");
  DirectionCheck r;
  const auto ker = kernel_basis(a);
  r.kernel_roots_in_v = std::all_of(ker.basis().begin(), ker.basis().end(),
                                    [&](const RatVector& b) { return cube_root_in(b, v); });
  if (!is_zero_vector(a * hpow(x_inf, 3))) {
    r.detail = "A(x_inf^3) != 0";
    return r;
  }
  if (!v.contains(x_inf)) {
    r.detail = "x_inf not in V";
    return r;
  }
  r.u = solve_affine_in_subspace(a, -x_inf, hadamard_scale(v, hpow(x_inf, 2)));
  r.holds = r.u.has_value();
  r.detail = r.holds ? "x_inf in A(V * x_inf^2)" : "x_inf not in A(V * x_inf^2)";
  return r;
}

// ---------------------------------------------------------------------------
// corank 1

// Kernel generated by an all-nonzero rational-cube-root vector: proper iff
// x_inf not in Im(AA^T) & A(Im(AA^T)) after normalization, i.e.
// x_inf = g^{1/3} not in V or not in A(V * x_inf^2).
inline std::optional<bool> corank1_fast_path(const RatMatrix& a) {
  const auto ker = kernel_basis(a);
  if (ker.dim() != 1) return std::nullopt;
  const RatVector& g = ker.basis().front();
  if (detail::nonzeros(g) != g.size()) return std::nullopt;
  const auto x = rational_cube_root_direction(g);
  if (!x) return std::nullopt;
  const auto n = normalize_kernel_direction(a, g);
  const RatMatrix& b = n.b;
  const RatMatrix bbt = b * b.transpose();
  const RatVector one = ones<Rational>(a.rows());
  const bool in_v = image_basis(bbt).contains(one);
  const bool in_av = subspace_image(b, image_basis(bbt)).contains(one);
  return !(in_v && in_av);
}

struct CertifyOptions {
  std::optional<RatVector> zeta;
  std::size_t zeta_samples = 2000;
  std::uint64_t seed = 0;
  std::vector<double> schedule = default_schedule();
};

namespace detail {

template <class T>
bool terms_in_image(const RatMatrix& a, const BasicRecipe<T>& r) {
  const auto im = image_basis(a);
  for (const auto& t : witness_terms(r)) {
    if constexpr (std::is_same_v<T, Rational>) {
      if (!im.contains(t.w)) return false;
    } else {
      if (!to_real(im).contains(t.w)) return false;
    }
  }
  return true;
}

// Attach a NonProper verdict after witness validation; false (with an audit
// entry) when the witness does not hold up.
template <class T>
bool accept_witness(Certificate& c, const RatMatrix& a, const BasicRecipe<T>& r, const std::string& reason,
                    const std::vector<double>& schedule, bool numeric) {
  if (!terms_in_image(a, r)) {
    c.record("witness " + reason + " in Im(A)", false, "witness terms leave Im(A); cannot lift to F_A");
    return false;
  }
  const auto rep = validate_witness(a, r, schedule);
  if (!rep.passed) {
    c.record("witness " + reason + " validation", false, rep.failure);
    return false;
  }
  c.record("witness " + reason + " validation", true,
           "residual slope " + std::to_string(rep.fitted_decay_exponent));
  c.verdict = Verdict::NonProper;
  c.reason = reason;
  c.numeric_only = numeric;
  if constexpr (std::is_same_v<T, Rational>) {
    c.evidence.recipe = r;
    c.evidence.vectors["x_inf"] = r.x_inf;
    c.evidence.vectors["u"] = r.u;
  } else {
    c.evidence.numeric_recipe = r;
  }
  for (const auto& f : rep.flags) c.notes.push_back(f);
  return true;
}

}  // namespace detail

inline Certificate corank1_decide(const RatMatrix& a, const CertifyOptions& opt = {}) {
  const auto ker = kernel_basis(a);
  if (ker.dim() != 1) throw DomainError("corank(A) = " + std::to_string(ker.dim()) + ", expected 1");
  Certificate c;
  const RatVector g = ker.basis().front();
  const Subspace v = image_basis(a * a.transpose());
  c.evidence.vectors["kernel generator"] = g;
  c.evidence.bases["Im(AA^T)"] = v.basis();
  if (const auto x = rational_cube_root_direction(g)) {
    c.record("Cor4 g^{1/3} rational", true, to_string(*x));
    if (const auto fast = corank1_fast_path(a)) {
      c.record("Cor4 fast path: 1 not in Im(BB^T) & B Im(BB^T)", *fast);
    }
    const auto rep = condition_chain(a, make_direction(*x), v, ConditionMode::S);
    c.record("Cor4 S(x_inf, Im(AA^T))", rep.satisfied,
             rep.satisfied ? std::to_string(rep.stages) + " stage(s)" : rep.failure);
    if (rep.extrapolated) c.notes.push_back("chain stages >= 2 extrapolated from proof");
    if (rep.satisfied) {
      if (rep.recipe && detail::accept_witness(c, a, *rep.recipe, "Cor4", opt.schedule, false)) return c;
      if (rep.numeric_recipe && detail::accept_witness(c, a, *rep.numeric_recipe, "Cor4", opt.schedule, true)) return c;
      return c;
    }
    if (!rep.numeric_only) {
      c.verdict = Verdict::Proper;
      c.reason = "Cor4";
      c.evidence.vectors["x_inf"] = *x;
    }
    return c;
  }
  c.record("Cor4 g^{1/3} rational", false, "irrational cube roots");
  if (!cube_root_in(g, v)) {
    c.record("Cor4 g^{1/3} in Im(AA^T)", false, "exact, by cube-root classes");
    c.verdict = Verdict::Proper;
    c.reason = "Cor4";
    return c;
  }
  c.record("Cor4 g^{1/3} in Im(AA^T)", true, "exact, by cube-root classes");
  // x_inf = sum_c rho_c w_c with Q-independent rho_c: each stage-0 equation
  // splits into rational ones
  const std::size_t m = a.rows();
  const auto cls = cube_root_classes(g);
  const auto w = cube_root_components(cls, m);
  std::vector<RatVector> u;
  for (const auto& wc : w) {
    auto s = solve_linear(a, -wc);
    if (!s) {
      c.record("Cor4 A u = -x_inf solvable", false, "exact, by cube-root classes");
      c.verdict = Verdict::Proper;
      c.reason = "Cor4";
      return c;
    }
    u.push_back(std::move(*s));
  }
  c.record("Cor4 A u = -x_inf solvable", true, "exact, by cube-root classes");
  // stage-0 correction u * x_inf^{-2} on supp(x_inf) inside pr(Im(AA^T))
  const bool in = scaled_combination_orthogonal_to(g, u, detail::projected_complement_rows(v, cls.support));
  c.record("Cor4 pr(u * x_inf^{-2}) in pr(Im(AA^T))", in, "exact, by cube-root classes");
  if (!in) {
    c.verdict = Verdict::Proper;
    c.reason = "Cor4";
    return c;
  }
  if (cls.support.size() < m) {
    // the off-support part of u is fixed since Ker(A) lives on the support
    std::vector<RatVector> block_units;
    std::vector<std::size_t> block;
    for (std::size_t i = 0; i < m; ++i) {
      if (g[i] != 0) continue;
      if (std::any_of(u.begin(), u.end(), [&](const RatVector& uc) { return uc[i] != 0; })) {
        block.push_back(i);
        block_units.push_back(unit_vector<Rational>(m, i));
      }
    }
    if (!block.empty()) {
      const Subspace vb = intersect(v, Subspace::span(m, block_units));
      for (auto i : block) {
        if (std::any_of(vb.basis().begin(), vb.basis().end(), [&](const RatVector& b) { return b[i] != 0; }))
          continue;
        c.record("Cor4 next target in Im(AA^T)", false,
                 "exact: coordinate " + std::to_string(i) + " vanishes on Im(AA^T) over the next block");
        c.verdict = Verdict::Proper;
        c.reason = "Cor4";
        return c;
      }
    }
  }
  const RealSubspace vr = to_real(v);
  const auto num = run_chain<Real>(to_real(a), real_cube_root_direction(g), &vr, ConditionMode::S);
  c.record("Cor4 S(x_inf, Im(AA^T)) numeric", num.satisfied ? "true" : "inconclusive", num.failure);
  if (num.satisfied) detail::accept_witness(c, a, num.recipe, "Cor4", opt.schedule, true);
  return c;
}

// ---------------------------------------------------------------------------
// pipeline

namespace detail {

inline void merge_audit(Certificate& into, const Certificate& from) {
  into.audit.insert(into.audit.end(), from.audit.begin(), from.audit.end());
  into.notes.insert(into.notes.end(), from.notes.begin(), from.notes.end());
}

inline Certificate with_audit(Certificate result, const Certificate& log) {
  std::vector<AuditEntry> audit = log.audit;
  audit.insert(audit.end(), result.audit.begin(), result.audit.end());
  result.audit = std::move(audit);
  std::vector<std::string> notes = log.notes;
  notes.insert(notes.end(), result.notes.begin(), result.notes.end());
  result.notes = std::move(notes);
  for (const auto& [k, v] : log.evidence.values) result.evidence.values.emplace(k, v);
  return result;
}

}  // namespace detail

inline Certificate certify(const RatMatrix& a, const CertifyOptions& opt = {}) {
  if (!a.is_square()) throw DimensionError("matrix must be square");
  Certificate log;
  const std::size_t m = a.rows();
  const std::size_t r = rank(a);
  log.evidence.values["m"] = std::to_string(m);
  log.evidence.values["rank"] = std::to_string(r);

  Thm1Options t1;
  t1.zeta = opt.zeta;
  t1.zeta_samples = opt.zeta_samples;
  t1.seed = opt.seed;
  Certificate thm1 = check_thm1(a, t1);
  if (thm1.decisive()) {
    thm1.record("Prop1.1 necessary condition search", "skipped", "decided by " + thm1.reason);
    for (const auto& [k, v] : log.evidence.values) thm1.evidence.values.emplace(k, v);
    return thm1;
  }
  detail::merge_audit(log, thm1);

  NecessarySearchOptions nopt;
  nopt.seed = opt.seed;
  const auto nec = necessary_condition_search(a, nopt);
  log.record("Prop1.1 necessary condition search", to_string(nec.status), nec.detail);
  if (nec.status == NecessaryStatus::NoneExact) {
    Certificate c = decided(Verdict::Proper, "Prop1.1");
    c.evidence.bases["Ker(A)"] = kernel_basis(a).basis();
    return detail::with_audit(c, log);
  }
  if (nec.x) log.evidence.vectors["necessary x"] = *nec.x;

  if (m - r == 1) {
    Certificate c = corank1_decide(a, opt);
    c = detail::with_audit(c, log);
    for (const auto& [k, v] : log.evidence.vectors) c.evidence.vectors.emplace(k, v);
    return c;
  }

  const Subspace v = image_basis(a * a.transpose());
  Certificate c = log;
  c.evidence.bases["Im(AA^T)"] = v.basis();

  // Cor3: all-nonzero rational candidates
  for (const auto& y : nec.candidates) {
    if (detail::nonzeros(y) != m) continue;
    const auto d = check_thm2_direction(a, v, y);
    c.record("Cor3 x_inf = " + to_string(y), d.holds, d.detail);
    if (!d.kernel_roots_in_v) c.notes.push_back("Ker(A)^{1/3} not contained in Im(AA^T) (recorded, not enforced)");
    if (!d.holds) continue;
    WitnessRecipe rec;
    rec.kind = RecipeKind::Simple;
    rec.x_inf = y;
    rec.u = *d.u;
    if (detail::accept_witness(c, a, rec, "Cor3", opt.schedule, false)) return c;
  }

  // S/N sweep
  bool all_n_fail_exact = nec.irrational_kernel.empty();
  for (const auto& y : nec.candidates) {
    const auto dir = make_direction(y);
    const auto s = condition_chain(a, dir, v, ConditionMode::S);
    c.record("ThmNS3 S(" + to_string(y) + ", Im(AA^T))", s.satisfied, s.satisfied ? "" : s.failure);
    if (s.satisfied) {
      if (s.extrapolated) c.notes.push_back("chain stages >= 2 extrapolated from proof");
      if (s.recipe && detail::accept_witness(c, a, *s.recipe, "ThmNS3", opt.schedule, false)) return c;
      if (s.numeric_recipe && detail::accept_witness(c, a, *s.numeric_recipe, "ThmNS3", opt.schedule, true)) return c;
    }
    const auto n = condition_chain(a, dir, v, ConditionMode::N);
    const bool exact_fail = !n.satisfied && !n.numeric_only && n.definitive;
    c.record("ThmNS1 N(" + to_string(y) + ")", n.satisfied ? "true" : exact_fail ? "false" : "inconclusive",
             n.failure);
    if (!exact_fail) all_n_fail_exact = false;
  }
  const RealSubspace vr = to_real(v);
  for (const auto& w : nec.irrational_kernel) {
    const auto s = run_chain<Real>(to_real(a), real_cube_root_direction(w), &vr, ConditionMode::S);
    c.record("ThmNS3 S(" + to_string(w) + "^{1/3}, Im(AA^T)) numeric", s.satisfied ? "true" : "inconclusive",
             s.failure);
    if (s.satisfied && detail::accept_witness(c, a, s.recipe, "ThmNS3", opt.schedule, true)) return c;
  }
  if (nec.complete && all_n_fail_exact) {
    c.verdict = Verdict::Proper;
    c.reason = "ThmNS1";
    return c;
  }
  if (!nec.complete) c.notes.push_back("candidate directions not exhaustive for corank >= 2");
  c.verdict = Verdict::Undecided;
  c.reason.clear();
  return c;
}

// Re-checks the certificate against A; returns the first failing item.
// x + (Ax)^k for any k >= 1. Only k = 1 and k = 3 can end Proper; other
// powers look for a validated Simple witness on kernel k-th roots.
inline Certificate certify_power(const RatMatrix& a, unsigned k, const CertifyOptions& opt = {}) {
  if (!a.is_square()) throw DimensionError("matrix must be square");
  if (k == 0) throw DomainError("k must be positive");
  if (k == 1) return k1_properness(a);
  if (k == 3) return certify(a, opt);
  Certificate c;
  c.evidence.values["k"] = std::to_string(k);
  const std::size_t m = a.rows();
  const auto ker = kernel_basis(a);
  const Subspace im = image_basis(a);
  const auto im_perp = orthogonal_complement_rows(im);
  for (const auto& g : ker.basis()) {
    for (int s : {1, -1}) {
      RatVector x(m);
      bool ok = true;
      for (std::size_t i = 0; i < m && ok; ++i) {
        const auto r = exact_root(Rational(s * g[i]), k);
        ok = r && *r != 0;
        if (ok) x[i] = *r;
      }
      if (!ok) continue;
      // corrections u * x^{1-k} must stay in Im(A)
      std::vector<RatVector> rows;
      for (const auto& n : im_perp) {
        RatVector w(m);
        for (std::size_t i = 0; i < m; ++i) w[i] = n[i] / ipow(x[i], k - 1);
        rows.push_back(std::move(w));
      }
      const Subspace adm = rows.empty() ? Subspace::full(m) : kernel_basis(RatMatrix::from_rows(rows));
      const auto u = solve_affine_in_subspace(a, RatVector(-x), adm);
      c.record("power-k direction " + to_string(x), u.has_value(), u ? "A u = -x_inf solvable" : "no admissible u");
      if (!u) continue;
      WitnessRecipe r;
      r.k = k;
      r.x_inf = x;
      r.u = *u;
      if (check_recipe(a, r)) continue;
      if (detail::accept_witness(c, a, r, "power-k witness", opt.schedule, false)) return c;
    }
  }
  c.notes.push_back("k = " + std::to_string(k) + ": only witnesses are searched; Proper needs k = 1 or k = 3");
  return c;
}

inline std::optional<std::string> verify_certificate(const RatMatrix& a, const Certificate& c,
                                                     const CertifyOptions& opt = {}) {
  if (c.verdict == Verdict::Undecided) return std::nullopt;
  if (c.verdict == Verdict::NonProper) {
    if (c.reason == "k1") {
      if (!c.evidence.recipe) return "missing recipe";
      if (auto bad = check_recipe(a, *c.evidence.recipe)) return *bad;
      return std::nullopt;
    }
    WitnessValidationReport rep;
    if (c.evidence.recipe) {
      if (auto bad = check_recipe(a, *c.evidence.recipe)) return *bad;
      if (!detail::terms_in_image(a, *c.evidence.recipe)) return "witness terms outside Im(A)";
      rep = validate_witness(a, *c.evidence.recipe, opt.schedule);
    } else if (c.evidence.numeric_recipe) {
      if (auto bad = check_recipe(a, *c.evidence.numeric_recipe)) return *bad;
      if (!detail::terms_in_image(a, *c.evidence.numeric_recipe)) return "witness terms outside Im(A)";
      rep = validate_witness(a, *c.evidence.numeric_recipe, opt.schedule);
    } else {
      return "NonProper without a witness recipe";
    }
    if (!rep.passed) return "witness validation failed: " + rep.failure;
    return std::nullopt;
  }
  if (c.numeric_only) return "Proper from numeric evidence";
  const std::string& r = c.reason;
  bool ok = false;
  if (r == "Thm1.1") ok = thm1_cond1(a);
  else if (r == "Thm1.2") ok = thm1_cond2(a);
  else if (r == "Thm1.3") ok = thm1_cond3(a);
  else if (r == "Thm1.6") ok = thm1_cond6(a);
  else if (r == "Thm1.5") ok = opt.zeta && thm1_cond5_exact(a, *opt.zeta).value_or(false);
  else if (r == "Prop1.1") ok = necessary_condition_search(a).status == NecessaryStatus::NoneExact;
  else if (r == "Cor4") ok = corank1_decide(a, opt).verdict == Verdict::Proper;
  else if (r == "ThmNS1") ok = certify(a, opt).verdict == Verdict::Proper;
  else if (r == "k1") ok = determinant(RatMatrix::identity(a.rows()) + a) != 0;
  else return "unknown reason '" + r + "'";
  if (!ok) return "condition " + r + " does not hold";
  return std::nullopt;
}

}  // namespace idc
