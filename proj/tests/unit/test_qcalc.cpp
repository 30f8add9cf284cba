#include "doctest.h"
#include "helpers.hpp"

#include "error.hpp"
#include "multiindex.hpp"

using namespace curvnd;
using namespace testutil;

namespace {

// Mixed derivative of the degree-s polynomial P(t) = det(V^T Q(t) W) along
// the given directions, read off by inclusion-exclusion on P.
double mixed_derivative(const TrilinearForm& Q, const std::vector<Vec>& dirs, const Mat& V, const Mat& W) {
  const int s = static_cast<int>(dirs.size());
  double total = 0;
  for (unsigned mask = 1; mask < (1u << s); ++mask) {
    Vec t = Vec::Zero(Q.d1());
    for (int j = 0; j < s; ++j)
      if (mask & (1u << j)) t += dirs[j];
    int pop = __builtin_popcount(mask);
    total += ((s - pop) % 2 ? -1.0 : 1.0) * qs_det(Q, t, V, W);
  }
  return total;
}

}  // namespace

TEST_SUITE("qcalc") {

TEST_CASE("multiindex compositions and expansion") {
  auto c = compositions(3, 2);
  CHECK(c.size() == 6);
  CHECK(c.front() == Multiindex{2, 0, 0});
  CHECK(expand({2, 0, 1}) == std::vector<int>{0, 0, 2});
  CHECK(count({0, 0, 2}, 3) == Multiindex{2, 0, 1});
  CHECK(std::exp(log_factorial(5)) == doctest::Approx(120));
}

TEST_CASE("triple enumeration counts") {
  // d1 = 2, k = 2, d = 2, orders 1 and 2: (2*2*2) + (3*3*3).
  CHECK(all_triples(2, 2, 2, 2).size() == 8 + 27);
}

TEST_CASE("theta pairs with v to give Q") {
  std::mt19937_64 g(41);
  auto Q = random_form(g, 2, 3, 2);
  Vec t = gaussian(g, 2, 1), v = gaussian(g, 3, 1), w = gaussian(g, 2, 1);
  CHECK(v.dot(Q.theta(t, w)) == doctest::Approx(Q.eval(t, v, w)).epsilon(1e-12));
  CHECK(v.dot(Q.slice(t) * w) == doctest::Approx(Q.eval(t, v, w)).epsilon(1e-12));
}

TEST_CASE("in_bases matches a direct contraction") {
  std::mt19937_64 g(43);
  auto Q = random_form(g, 2, 2, 3);
  Mat U = gaussian(g, 2, 2), V = gaussian(g, 2, 2), W = gaussian(g, 3, 3);
  auto Qb = Q.in_bases(U, V, W);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 3; ++c) {
        double direct = 0;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            for (int l = 0; l < 3; ++l) direct += Q(i, j, l) * U(i, a) * V(j, b) * W(l, c);
        CHECK(Qb(a, b, c) == doctest::Approx(direct).epsilon(1e-12));
      }
}

TEST_CASE("hand example t1 t2") {
  // Q(t) = diag(t1, t2) so Q_2(t) = t1 t2.
  TrilinearForm Q(2, 2, 2, {1, 0, 0, 0, 0, 0, 0, 1});
  auto id = BasisTriple::identity(2, 2, 2);
  CHECK(derivative_coefficient(Q, id, {{1, 1}, {1, 1}, {1, 1}}) == doctest::Approx(1.0));
  CHECK(derivative_coefficient(Q, id, {{2, 0}, {1, 1}, {1, 1}}) == doctest::Approx(0.0));
  CHECK(derivative_coefficient(Q, id, {{1, 0}, {1, 0}, {1, 0}}) == doctest::Approx(1.0));
  CHECK(derivative_coefficient(Q, id, {{0, 1}, {1, 0}, {1, 0}}) == doctest::Approx(0.0));
}

TEST_CASE("coefficients agree with derivatives of the determinant polynomial") {
  std::mt19937_64 g(47);
  for (int trial = 0; trial < 10; ++trial) {
    auto Q = random_form(g, 2, 3, 3);
    BasisTriple b(VectorList(orthogonal(g, 2)), VectorList(orthogonal(g, 3)), VectorList(orthogonal(g, 3)));
    for (const auto& tr : all_triples(2, 3, 3, 3)) {
      auto su = expand(tr.alpha), sv = expand(tr.beta), sw = expand(tr.gamma);
      std::vector<Vec> dirs;
      for (int a : su) dirs.push_back(b.u[a]);
      Mat V(3, sv.size()), W(3, sw.size());
      for (std::size_t i = 0; i < sv.size(); ++i) V.col(i) = b.v[sv[i]];
      for (std::size_t i = 0; i < sw.size(); ++i) W.col(i) = b.w[sw[i]];
      double oracle = mixed_derivative(Q, dirs, V, W);
      double perm = derivative_coefficient(Q, b, tr, CoefMethod::Permutation);
      double pol = derivative_coefficient(Q, b, tr, CoefMethod::Polarization);
      CHECK(perm == doctest::Approx(oracle).epsilon(1e-9).scale(1.0));
      CHECK(pol == doctest::Approx(perm).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("script Q of the zero form is one") {
  TrilinearForm Q(1, 2, 2);
  CHECK(script_q(Q, BasisTriple::identity(1, 2, 2)) == doctest::Approx(1.0));
}

TEST_CASE("script Q from a single first-order coefficient") {
  // Only Q(e1, e1, e1) = 3: Q = sqrt(1 + 9).
  TrilinearForm Q(1, 1, 2, {3, 0});
  CHECK(script_q(Q, BasisTriple::identity(1, 1, 2)) == doctest::Approx(std::sqrt(10.0)));
}

TEST_CASE("scaling order") {
  CHECK(scaling_order(1, 2) == doctest::Approx(2.0 / 3.0));
  CHECK(scaling_order(2, 2) == doctest::Approx(1.0));
}

TEST_CASE("inversion identity sides agree") {
  std::mt19937_64 g(53);
  for (int k = 1; k <= 3; ++k)
    for (int d = 1; d <= 3; ++d) {
      auto Q = random_form(g, 2, k, d);
      BasisTriple b(VectorList(gaussian(g, 2, 2)), VectorList(gaussian(g, k, k)), VectorList(gaussian(g, d, d)));
      auto s = inversion_identity(Q, b);
      CHECK(s.lhs == doctest::Approx(s.rhs).epsilon(1e-9));
    }
}

TEST_CASE("qs_det rejects bad shapes") {
  TrilinearForm Q(1, 2, 2);
  CHECK_THROWS_AS(qs_det(Q, Vec::Zero(1), Mat::Zero(2, 3), Mat::Zero(2, 3)), Error);
}

}
