#pragma once

// Numeric oracle for properness: estimates mu(R) = min |F_A(x)| over the
// sphere |x| = R. Heuristic upper bounds only.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "idcubic/error.hpp"
#include "idcubic/forge.hpp"
#include "idcubic/matrix.hpp"
#include "idcubic/witness.hpp"

namespace idc {

enum class ProbeHint { GrowthObserved, BoundedObserved, Inconclusive };

inline std::string to_string(ProbeHint h) {
  switch (h) {
    case ProbeHint::GrowthObserved: return "GrowthObserved";
    case ProbeHint::BoundedObserved: return "BoundedObserved";
    case ProbeHint::Inconclusive: return "Inconclusive";
  }
  return "?";
}

inline std::vector<double> default_radii() {
  std::vector<double> r;
  for (int i = 0; i <= 10; ++i) r.push_back(std::ldexp(1.0, i));
  return r;
}

struct ProbeOptions {
  unsigned k = 3;
  std::vector<double> radii = default_radii();
  unsigned restarts = 8;
  std::uint64_t seed = 1;
  unsigned iterations = 150;
  std::size_t dense_samples = 4000;  // m <= 3 only
  double growth_slope = 0.08;
  double bounded_slope = 0.02;
  double bounded_factor = 3.0;
  bool parallel = true;
};

struct ProbeReport {
  std::vector<double> radii;
  std::vector<double> mu_estimates;
  std::vector<FloatVector> minimizers;
  unsigned restarts = 0;
  std::uint64_t seed = 0;
  double top_slope = 0;
  ProbeHint verdict_hint = ProbeHint::Inconclusive;
};

namespace detail {

using EMat = Eigen::MatrixXd;
using EVec = Eigen::VectorXd;

inline EVec probe_map(const EMat& a, const EVec& x, unsigned k) {
  EVec y = a * x;
  EVec f = x;
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] += std::pow(y[i], static_cast<int>(k));
  return f;
}

inline EVec on_sphere(const EVec& x, double r) {
  const double n = x.norm();
  if (n == 0) {
    EVec e = EVec::Zero(x.size());
    e[0] = r;
    return e;
  }
  return x * (r / n);
}

// Levenberg-Marquardt on the tangent space, retracting by normalization.
inline EVec sphere_descent(const EMat& a, EVec x, double r, unsigned k, unsigned iterations) {
  const auto m = x.size();
  x = on_sphere(x, r);
  EVec f = probe_map(a, x, k);
  double fx = f.squaredNorm();
  double lambda = 1e-3;
  for (unsigned it = 0; it < iterations && fx > 0; ++it) {
    const EVec y = a * x;
    EMat j = EMat::Identity(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      j.row(i) += k * std::pow(y[i], static_cast<int>(k) - 1) * a.row(i);
    const EVec n = x / r;
    const EMat p = EMat::Identity(m, m) - n * n.transpose();
    const EMat jp = j * p;
    const EMat h = jp.transpose() * jp;
    const EVec g = jp.transpose() * f;
    const double scale = h.trace() / static_cast<double>(m) + 1.0;
    bool improved = false;
    while (lambda < 1e12) {
      const EMat lhs = h + lambda * scale * EMat::Identity(m, m);
      const EVec d = p * lhs.ldlt().solve(-g);
      const EVec xt = on_sphere(x + d, r);
      const EVec ft = probe_map(a, xt, k);
      const double fxt = ft.squaredNorm();
      if (std::isfinite(fxt) && fxt < fx) {
        const bool tiny = fx - fxt <= 1e-14 * fx;
        x = xt;
        f = ft;
        fx = fxt;
        lambda = std::max(lambda / 3, 1e-12);
        improved = !tiny;
        break;
      }
      lambda *= 4;
    }
    if (!improved) break;
  }
  return x;
}

inline EVec random_direction(std::size_t m, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  EVec v(static_cast<Eigen::Index>(m));
  do {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = n(rng);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

struct RestartTrace {
  std::vector<double> values;
  std::vector<EVec> points;
};

// One restart: continuation through the radii from a seeded start, plus a
// fresh random start at every radius.
inline RestartTrace probe_restart(const EMat& a, const ProbeOptions& opt, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto m = static_cast<std::size_t>(a.rows());
  RestartTrace t;
  EVec carry = random_direction(m, rng);
  double prev_r = 1.0;
  for (double r : opt.radii) {
    carry = sphere_descent(a, carry * (r / prev_r), r, opt.k, opt.iterations);
    const EVec fresh = sphere_descent(a, random_direction(m, rng) * r, r, opt.k, opt.iterations);
    const double vc = probe_map(a, carry, opt.k).norm();
    const double vf = probe_map(a, fresh, opt.k).norm();
    if (vf < vc) carry = fresh;
    t.values.push_back(std::min(vc, vf));
    t.points.push_back(carry);
    prev_r = r;
  }
  return t;
}

}  // namespace detail

inline ProbeReport probe_mu(const RatMatrix& a, const ProbeOptions& opt = {}) {
  if (a.rows() != a.cols()) throw DimensionError("probe_mu needs a square matrix");
  if (opt.k == 0) throw DomainError("k must be positive");
  if (opt.radii.empty()) throw DomainError("radii must be non-empty");
  for (std::size_t i = 0; i < opt.radii.size(); ++i) {
    if (!(opt.radii[i] > 0)) throw DomainError("radii must be positive");
    if (i && opt.radii[i] <= opt.radii[i - 1]) throw DomainError("radii must be strictly increasing");
  }
  const std::size_t m = a.rows();
  detail::EMat ea(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) ea(i, j) = a(i, j).convert_to<double>();

  ProbeReport rep;
  rep.radii = opt.radii;
  rep.restarts = std::max(1u, opt.restarts);
  rep.seed = opt.seed;
  const std::size_t nr = opt.radii.size();
  rep.mu_estimates.assign(nr, std::numeric_limits<double>::infinity());
  rep.minimizers.assign(nr, FloatVector(m, 0.0));
  if (m == 0) {
    std::fill(rep.mu_estimates.begin(), rep.mu_estimates.end(), 0.0);
    return rep;
  }

  std::vector<detail::RestartTrace> traces(rep.restarts);
  auto seed_of = [&](unsigned i) { return splitmix64(opt.seed ^ splitmix64(i + 1)); };
  if (opt.parallel) {
    std::vector<std::future<detail::RestartTrace>> jobs;
    for (unsigned i = 0; i < rep.restarts; ++i)
      jobs.push_back(std::async(std::launch::async, detail::probe_restart, std::cref(ea), std::cref(opt), seed_of(i)));
    for (unsigned i = 0; i < rep.restarts; ++i) traces[i] = jobs[i].get();
  } else {
    for (unsigned i = 0; i < rep.restarts; ++i) traces[i] = detail::probe_restart(ea, opt, seed_of(i));
  }

  auto offer = [&](std::size_t ri, const detail::EVec& x, double v) {
    if (v < rep.mu_estimates[ri]) {
      rep.mu_estimates[ri] = v;
      for (std::size_t c = 0; c < m; ++c) rep.minimizers[ri][c] = x[static_cast<Eigen::Index>(c)];
    }
  };
  for (const auto& t : traces)
    for (std::size_t ri = 0; ri < nr; ++ri) offer(ri, t.points[ri], t.values[ri]);

  if (m <= 3 && opt.dense_samples > 0) {
    std::mt19937_64 rng(splitmix64(opt.seed ^ 0xd1b54a32d192ed03ULL));
    std::vector<detail::EVec> dirs;
    for (std::size_t s = 0; s < opt.dense_samples; ++s) dirs.push_back(detail::random_direction(m, rng));
    for (std::size_t ri = 0; ri < nr; ++ri) {
      const double r = opt.radii[ri];
      double best = std::numeric_limits<double>::infinity();
      detail::EVec arg = dirs.front() * r;
      for (const auto& d : dirs) {
        const double v = detail::probe_map(ea, d * r, opt.k).norm();
        if (v < best) best = v, arg = d * r;
      }
      arg = detail::sphere_descent(ea, arg, r, opt.k, opt.iterations);
      offer(ri, arg, detail::probe_map(ea, arg, opt.k).norm());
    }
  }

  // top decade: radii within a factor 10 of the largest
  const double rmax = opt.radii.back();
  std::vector<double> lx, ly;
  double top_max = 0, low_max = 0;
  for (std::size_t ri = 0; ri < nr; ++ri) {
    const double v = std::max(rep.mu_estimates[ri], 1e-12);
    if (opt.radii[ri] * 10 >= rmax) {
      lx.push_back(std::log(opt.radii[ri]));
      ly.push_back(std::log(v));
      top_max = std::max(top_max, v);
    } else {
      low_max = std::max(low_max, v);
    }
  }
  if (lx.size() < 2) return rep;
  rep.top_slope = fit_slope(lx, ly);
  if (rep.top_slope >= opt.growth_slope && ly.back() > ly.front())
    rep.verdict_hint = ProbeHint::GrowthObserved;
  else if (low_max > 0 && top_max <= opt.bounded_factor * low_max && rep.top_slope <= opt.bounded_slope)
    rep.verdict_hint = ProbeHint::BoundedObserved;
  return rep;
}

}  // namespace idc
