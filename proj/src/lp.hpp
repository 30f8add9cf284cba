#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <vector>

namespace curvnd::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

template <class T>
struct Problem {
  // minimize c.x subject to A x = b, x >= 0; A is row-major rows x cols.
  std::size_t rows = 0, cols = 0;
  std::vector<T> A, b, c;
  T& at(std::size_t r, std::size_t j) { return A[r * cols + j]; }
  void resize(std::size_t r, std::size_t n) {
    rows = r;
    cols = n;
    A.assign(r * n, T(0));
    b.assign(r, T(0));
    c.assign(n, T(0));
  }
};

template <class T>
struct Solution {
  Status status = Status::Infeasible;
  std::vector<T> x;
  T objective = T(0);
  T infeasibility = T(0);  // phase-one optimum (sum of artificials)
  std::size_t pivots = 0;
};

template <class T>
struct Arith;

template <>
struct Arith<double> {
  static constexpr double eps = 1e-11;
  static bool pos(double v) { return v > eps; }
  static bool neg(double v) { return v < -eps; }
  static bool zero(double v) { return std::abs(v) <= eps; }
};

template <>
struct Arith<mpq_class> {
  static bool pos(const mpq_class& v) { return sgn(v) > 0; }
  static bool neg(const mpq_class& v) { return sgn(v) < 0; }
  static bool zero(const mpq_class& v) { return sgn(v) == 0; }
};

// Two-phase dense tableau simplex with Bland's rule.
template <class T>
Solution<T> solve(Problem<T> p, std::size_t max_pivots = 200000);

extern template Solution<double> solve<double>(Problem<double>, std::size_t);
extern template Solution<mpq_class> solve<mpq_class>(Problem<mpq_class>, std::size_t);

}  // namespace curvnd::lp
