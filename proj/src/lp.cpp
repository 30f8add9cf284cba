#include "lp.hpp"

#include <utility>

namespace curvnd::lp {

namespace {

template <class T>
struct Tableau {
  std::size_t m, n;  // constraint rows, structural + artificial columns
  std::vector<T> t;  // (m + 1) x (n + 1); last row objective, last column rhs
  std::vector<std::size_t> basis;

  T& at(std::size_t r, std::size_t j) { return t[r * (n + 1) + j]; }
  T& rhs(std::size_t r) { return t[r * (n + 1) + n]; }

  void pivot(std::size_t r, std::size_t j) {
    T inv = T(1) / at(r, j);
    for (std::size_t q = 0; q <= n; ++q) at(r, q) *= inv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == r) continue;
      T f = at(i, j);
      if (f == T(0)) continue;
      for (std::size_t q = 0; q <= n; ++q) {
        if (at(r, q) == T(0)) continue;
        at(i, q) -= f * at(r, q);
      }
      at(i, j) = T(0);
    }
    basis[r] = j;
  }

  // Reduced costs live in the objective row; minimise.
  Status run(const std::vector<bool>& allowed, std::size_t& pivots, std::size_t max_pivots) {
    while (true) {
      std::size_t enter = n;
      for (std::size_t j = 0; j < n; ++j)
        if (allowed[j] && Arith<T>::neg(at(m, j))) {
          enter = j;
          break;
        }
      if (enter == n) return Status::Optimal;
      std::size_t leave = m;
      T best = T(0);
      for (std::size_t i = 0; i < m; ++i) {
        if (!Arith<T>::pos(at(i, enter))) continue;
        T ratio = rhs(i) / at(i, enter);
        if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m) return Status::Unbounded;
      pivot(leave, enter);
      if (++pivots > max_pivots) return Status::IterationLimit;
    }
  }
};

}  // namespace

template <class T>
Solution<T> solve(Problem<T> p, std::size_t max_pivots) {
  const std::size_t m = p.rows, n0 = p.cols;
  for (std::size_t r = 0; r < m; ++r)
    if (p.b[r] < T(0)) {
      p.b[r] = -p.b[r];
      for (std::size_t j = 0; j < n0; ++j) p.A[r * n0 + j] = -p.A[r * n0 + j];
    }
  Tableau<T> tb;
  tb.m = m;
  tb.n = n0 + m;
  tb.t.assign((m + 1) * (tb.n + 1), T(0));
  tb.basis.resize(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n0; ++j) tb.at(r, j) = p.A[r * n0 + j];
    tb.at(r, n0 + r) = T(1);
    tb.rhs(r) = p.b[r];
    tb.basis[r] = n0 + r;
  }
  // Phase one objective: sum of artificials, expressed in reduced form.
  for (std::size_t j = 0; j <= tb.n; ++j) {
    T s = T(0);
    if (j < n0 || j == tb.n)
      for (std::size_t r = 0; r < m; ++r) s -= tb.at(r, j);
    tb.at(m, j) = s;
  }
  Solution<T> sol;
  std::vector<bool> allowed(tb.n, true);
  Status st = tb.run(allowed, sol.pivots, max_pivots);
  if (st == Status::IterationLimit) {
    sol.status = st;
    return sol;
  }
  sol.infeasibility = -tb.rhs(m);
  if (Arith<T>::pos(sol.infeasibility)) {
    sol.status = Status::Infeasible;
    sol.x.assign(n0, T(0));
    for (std::size_t r = 0; r < m; ++r)
      if (tb.basis[r] < n0) sol.x[tb.basis[r]] = tb.rhs(r);
    return sol;
  }
  // Drive remaining artificials out of the basis where possible.
  for (std::size_t r = 0; r < m; ++r) {
    if (tb.basis[r] < n0) continue;
    for (std::size_t j = 0; j < n0; ++j)
      if (!Arith<T>::zero(tb.at(r, j))) {
        tb.pivot(r, j);
        break;
      }
  }
  for (std::size_t j = n0; j < tb.n; ++j) allowed[j] = false;
  // Phase two objective.
  for (std::size_t j = 0; j <= tb.n; ++j) tb.at(m, j) = (j < n0) ? p.c[j] : T(0);
  for (std::size_t r = 0; r < m; ++r) {
    std::size_t bj = tb.basis[r];
    if (bj >= n0) continue;
    T f = tb.at(m, bj);
    if (f == T(0)) continue;
    for (std::size_t q = 0; q <= tb.n; ++q) tb.at(m, q) -= f * tb.at(r, q);
  }
  st = tb.run(allowed, sol.pivots, max_pivots);
  sol.status = st;
  sol.x.assign(n0, T(0));
  for (std::size_t r = 0; r < m; ++r)
    if (tb.basis[r] < n0) sol.x[tb.basis[r]] = tb.rhs(r);
  sol.objective = -tb.rhs(m);
  return sol;
}

template Solution<double> solve<double>(Problem<double>, std::size_t);
template Solution<mpq_class> solve<mpq_class>(Problem<mpq_class>, std::size_t);

}  // namespace curvnd::lp
