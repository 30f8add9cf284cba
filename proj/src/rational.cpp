#include "rational.hpp"

#include "error.hpp"

#include <cmath>

namespace curvnd {

RationalFunction::RationalFunction(QPoly num) : num_(std::move(num)), den_(QPoly::constant(num_.nvars(), 1)) {}

RationalFunction::RationalFunction(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) fail(Errc::InvalidArgument, "rational function: zero denominator");
  if (num_.nvars() != den_.nvars()) fail(Errc::DimensionMismatch, "rational function: variable count mismatch");
  normalize();
}

RationalFunction RationalFunction::constant(int nvars, const mpq_class& c) {
  return RationalFunction(QPoly::constant(nvars, c));
}

void RationalFunction::normalize() {
  if (num_.is_zero()) {
    den_ = QPoly::constant(num_.nvars(), 1);
    return;
  }
  mpq_class lead = den_.terms().rbegin()->second;
  if (lead == 1) return;
  mpq_class inv = 1 / lead;
  num_ = num_ * inv;
  den_ = den_ * inv;
}

bool RationalFunction::equals_constant(const mpq_class& c) const { return (num_ - den_ * c).is_zero(); }

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
  if (den_ == o.den_) return RationalFunction(num_ + o.num_, den_);
  return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const { return *this + (-o); }

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
  if (is_zero() || o.is_zero()) return constant(nvars(), 0);
  return RationalFunction(num_ * o.num_, den_ * o.den_);
}

RationalFunction RationalFunction::operator*(const mpq_class& s) const {
  RationalFunction r = *this;
  r.num_ = r.num_ * s;
  if (r.num_.is_zero()) r.den_ = QPoly::constant(nvars(), 1);
  return r;
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
  if (o.is_zero()) fail(Errc::InvalidArgument, "rational function: division by zero");
  return RationalFunction(num_ * o.den_, den_ * o.num_);
}

RationalFunction RationalFunction::derivative(int var) const {
  if (den_.degree() == 0) return RationalFunction(num_.derivative(var), den_);
  return RationalFunction(num_.derivative(var) * den_ - num_ * den_.derivative(var), den_ * den_);
}

double RationalFunction::eval(const std::vector<double>& x, double tol) const {
  double dv = den_.eval(x);
  if (!(std::abs(dv) >= tol)) fail(Errc::InvalidArgument, "rational function: denominator vanishes at point");
  return num_.eval(x) / dv;
}

mpq_class RationalFunction::eval_exact(const std::vector<mpq_class>& x) const {
  mpq_class dv = den_.eval_exact(x);
  if (dv == 0) fail(Errc::InvalidArgument, "rational function: denominator vanishes at point");
  mpq_class r = num_.eval_exact(x) / dv;
  r.canonicalize();
  return r;
}

RationalFunction rational_det(const std::vector<std::vector<RationalFunction>>& m) {
  const std::size_t n = m.size();
  if (n == 0) fail(Errc::DimensionMismatch, "rational_det: empty matrix");
  if (n == 1) return m[0][0];
  RationalFunction acc;
  bool have = false;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    std::vector<std::vector<RationalFunction>> sub;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<RationalFunction> row;
      for (std::size_t cc = 0; cc < n; ++cc)
        if (cc != c) row.push_back(m[r][cc]);
      sub.push_back(std::move(row));
    }
    RationalFunction term = m[0][c] * rational_det(sub);
    if (c % 2 == 1) term = -term;
    acc = have ? acc + term : term;
    have = true;
  }
  return have ? acc : RationalFunction::constant(m[0][0].nvars(), 0);
}

QPoly to_exact(const Polynomial<double>& p) {
  QPoly q(p.nvars());
  for (const auto& [e, c] : p.terms()) q.add_term(e, mpq_class(c));
  return q;
}

}  // namespace curvnd
