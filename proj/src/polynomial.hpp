#pragma once

#include "error.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <vector>

namespace curvnd {

inline double as_double(double v) { return v; }
inline double as_double(const mpq_class& q) { return q.get_d(); }

// Sparse polynomial: exponent vector -> coefficient, zero terms never stored.
template <class T>
class Polynomial {
public:
  using Exponent = std::vector<int>;
  using Terms = std::map<Exponent, T>;

  Polynomial() = default;
  explicit Polynomial(int nvars) : nv_(nvars) {}

  static Polynomial constant(int nvars, const T& c) {
    Polynomial p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
  }
  static Polynomial variable(int nvars, int i) {
    Polynomial p(nvars);
    Exponent e(nvars, 0);
    e.at(i) = 1;
    p.add_term(e, T(1));
    return p;
  }

  int nvars() const { return nv_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  int degree() const {
    int deg = 0;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int v : e) s += v;
      deg = std::max(deg, s);
    }
    return is_zero() ? -1 : deg;
  }

  void add_term(const Exponent& e, const T& c) {
    if (static_cast<int>(e.size()) != nv_) fail(Errc::DimensionMismatch, "polynomial: exponent length mismatch");
    for (int v : e)
      if (v < 0) fail(Errc::InvalidArgument, "polynomial: negative exponent");
    if (c == T(0)) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
      return;
    }
    it->second += c;
    if (it->second == T(0)) terms_.erase(it);
  }

  T coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? T(0) : it->second;
  }

  Polynomial operator+(const Polynomial& o) const {
    check(o);
    Polynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }
  Polynomial operator-() const {
    Polynomial r(nv_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }
  Polynomial operator-(const Polynomial& o) const { return *this + (-o); }
  Polynomial operator*(const T& s) const {
    Polynomial r(nv_);
    if (s == T(0)) return r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * s);
    return r;
  }
  Polynomial operator*(const Polynomial& o) const {
    check(o);
    Polynomial r(nv_);
    Exponent e(nv_);
    for (const auto& [ea, ca] : terms_)
      for (const auto& [eb, cb] : o.terms_) {
        for (int i = 0; i < nv_; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  Polynomial pow(int p) const {
    Polynomial r = constant(nv_, T(1)), b = *this;
    for (; p > 0; p >>= 1) {
      if (p & 1) r = r * b;
      if (p > 1) b = b * b;
    }
    return r;
  }
  bool operator==(const Polynomial& o) const { return nv_ == o.nv_ && terms_ == o.terms_; }

  Polynomial derivative(int var) const {
    if (var < 0 || var >= nv_) fail(Errc::DimensionMismatch, "polynomial: derivative variable out of range");
    Polynomial r(nv_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponent f = e;
      f[var] -= 1;
      r.add_term(f, c * T(e[var]));
    }
    return r;
  }

  // Exact evaluation in the coefficient type.
  T eval_exact(const std::vector<T>& x) const {
    if (static_cast<int>(x.size()) != nv_) fail(Errc::DimensionMismatch, "polynomial: point dimension mismatch");
    T s(0);
    for (const auto& [e, c] : terms_) {
      T m = c;
      for (int i = 0; i < nv_; ++i)
        for (int j = 0; j < e[i]; ++j) m *= x[i];
      s += m;
    }
    return s;
  }

  double eval(const double* x) const {
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
      double m = as_double(c);
      for (int i = 0; i < nv_; ++i)
        for (int j = 0; j < e[i]; ++j) m *= x[i];
      s += m;
    }
    return s;
  }
  double eval(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != nv_) fail(Errc::DimensionMismatch, "polynomial: point dimension mismatch");
    return eval(x.data());
  }

private:
  void check(const Polynomial& o) const {
    if (o.nv_ != nv_) fail(Errc::DimensionMismatch, "polynomial: variable count mismatch");
  }
  int nv_ = 0;
  Terms terms_;
};

}  // namespace curvnd
