#pragma once

// Sparse multivariate polynomials with rational coefficients.

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "idcubic/matrix.hpp"

namespace idc {

class MultiPoly {
 public:
  using Exponent = std::vector<unsigned>;
  using Terms = std::map<Exponent, Rational>;

  explicit MultiPoly(std::size_t nvars = 0) : n_(nvars) {}

  static MultiPoly constant(std::size_t nvars, const Rational& c) {
    MultiPoly p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
  }

  static MultiPoly variable(std::size_t nvars, std::size_t i) {
    MultiPoly p(nvars);
    Exponent e(nvars, 0);
    e.at(i) = 1;
    p.add_term(e, Rational(1));
    return p;
  }

  // sum_i c_i x_i
  static MultiPoly linear(const RatVector& c) {
    MultiPoly p(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      Exponent e(c.size(), 0);
      e[i] = 1;
      p.add_term(e, c[i]);
    }
    return p;
  }

  std::size_t nvars() const { return n_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && is_const_exp(terms_.begin()->first));
  }

  Rational constant_term() const {
    auto it = terms_.find(Exponent(n_, 0));
    return it == terms_.end() ? Rational(0) : it->second;
  }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) {
      unsigned s = 0;
      for (unsigned x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }

  void add_term(const Exponent& e, const Rational& c) {
    if (e.size() != n_) throw DimensionError("monomial arity mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rational evaluate(const RatVector& x) const {
    if (x.size() != n_) throw DimensionError("evaluation point has wrong length");
    Rational total = 0;
    for (const auto& [e, c] : terms_) {
      Rational t = c;
      for (std::size_t i = 0; i < n_; ++i)
        if (e[i]) t *= ipow(x[i], e[i]);
      total += t;
    }
    return total;
  }

  MultiPoly& operator+=(const MultiPoly& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  MultiPoly& operator-=(const MultiPoly& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check(b);
    MultiPoly r(a.n_);
    Exponent e(a.n_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < a.n_; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }

  friend MultiPoly operator*(const Rational& s, MultiPoly p) {
    if (s == 0) return MultiPoly(p.n_);
    for (auto& [e, c] : p.terms_) c *= s;
    return p;
  }

  MultiPoly pow(unsigned k) const {
    MultiPoly r = constant(n_, Rational(1));
    for (unsigned i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

  // Highest degree first: "3*x1^2 + 1".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<Exponent, Rational>> ts(terms_.begin(), terms_.end());
    std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
      unsigned da = 0, db = 0;
      for (unsigned x : a.first) da += x;
      for (unsigned x : b.first) db += x;
      return da != db ? da > db : a.first > b.first;
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : ts) {
      Rational mag = abs_of(c);
      if (first) {
        if (c < 0) os << "-";
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      const bool is_const = is_const_exp(e);
      if (is_const || mag != 1) os << idc::to_string(mag);
      bool need_star = !is_const && mag != 1;
      for (std::size_t i = 0; i < n_; ++i) {
        if (!e[i]) continue;
        if (need_star) os << "*";
        os << "x" << (i + 1);
        if (e[i] > 1) os << "^" << e[i];
        need_star = true;
      }
    }
    return os.str();
  }

 private:
  static bool is_const_exp(const Exponent& e) {
    for (unsigned x : e)
      if (x) return false;
    return true;
  }
  void check(const MultiPoly& o) const {
    if (o.n_ != n_) throw DimensionError("polynomials over different variable counts");
  }

  std::size_t n_;
  Terms terms_;
};

}  // namespace idc
