#pragma once

#include "polynomial.hpp"

#include <gmpxx.h>

#include <string>
#include <vector>

namespace curvnd {

using QPoly = Polynomial<mpq_class>;

// num / den over Q, no gcd cancellation. The denominator is scaled so that
// its largest term (in exponent order) has coefficient 1.
class RationalFunction {
public:
  RationalFunction() = default;
  explicit RationalFunction(QPoly num);
  RationalFunction(QPoly num, QPoly den);
  static RationalFunction constant(int nvars, const mpq_class& c);

  int nvars() const { return num_.nvars(); }
  const QPoly& num() const { return num_; }
  const QPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  // True when num - c * den vanishes identically.
  bool equals_constant(const mpq_class& c) const;

  RationalFunction operator+(const RationalFunction& o) const;
  RationalFunction operator-(const RationalFunction& o) const;
  RationalFunction operator-() const;
  RationalFunction operator*(const RationalFunction& o) const;
  RationalFunction operator*(const mpq_class& s) const;
  RationalFunction operator/(const RationalFunction& o) const;
  RationalFunction derivative(int var) const;

  // Throws InvalidArgument when |den| < tol at x.
  double eval(const std::vector<double>& x, double tol = 1e-14) const;
  mpq_class eval_exact(const std::vector<mpq_class>& x) const;

private:
  void normalize();
  QPoly num_, den_;
};

// Determinant by cofactor expansion.
RationalFunction rational_det(const std::vector<std::vector<RationalFunction>>& m);

QPoly to_exact(const Polynomial<double>& p);

}  // namespace curvnd
