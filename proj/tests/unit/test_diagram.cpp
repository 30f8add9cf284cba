#include "doctest.h"
#include "helpers.hpp"

#include "diagram.hpp"
#include "error.hpp"

using namespace curvnd;
using namespace testutil;

namespace {

TrilinearForm degenerate_form() { return TrilinearForm(1, 1, 2, {1, 0}); }

TrilinearForm nondegenerate_form() {
  // Q[i][0][j] = delta_ij
  return TrilinearForm(2, 1, 2, {1, 0, 0, 1});
}

VerdictConfig quick(int threads = 1) {
  VerdictConfig c;
  c.threads = threads;
  return c;
}

}  // namespace

TEST_SUITE("diagram") {

TEST_CASE("scaling point coordinates") {
  auto o = main_scaling_point(1, 1, 2);
  CHECK(o.exact[0] == mpq_class(2, 3));
  CHECK(o.exact[1] == mpq_class(2, 3));
  CHECK(o.exact[2] == mpq_class(1, 3));
  CHECK(o.approx(3) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("hull membership on a segment") {
  std::vector<MultiindexTriple> pts = {origin_triple(1, 1, 1), {{1}, {1}, {1}}};
  auto in = hull_membership(pts, std::vector<double>{0.5, 0.5, 0.5}, {1e-9, true});
  REQUIRE(in.inside);
  CHECK(in.weights[0] == doctest::Approx(0.5));
  CHECK(in.exact_weights[1] == "1/2");
  // Separators are traceless on the v and w blocks.
  std::vector<MultiindexTriple> pts2 = {origin_triple(1, 1, 2), {{1}, {1}, {1, 0}}};
  auto out = hull_membership(pts2, std::vector<double>{0.5, 0.5, 0, 0.5});
  CHECK_FALSE(out.inside);
  CHECK(out.separation > 0);
  CHECK(out.separator(3) > out.separator(2));
}

TEST_CASE("n0 points of the degenerate form") {
  auto s = n0_points(degenerate_form(), BasisTriple::identity(1, 1, 2));
  REQUIRE(s.points.size() == 2);
  CHECK(s.points[1].triple == MultiindexTriple{{1}, {1}, {1, 0}});
  CHECK(s.points[1].coefficient == doctest::Approx(1.0));
}

TEST_CASE("non-orthonormal bases are rejected") {
  BasisTriple b(VectorList(Mat::Identity(1, 1) * 2), VectorList(Mat::Identity(1, 1)), VectorList(Mat::Identity(2, 2)));
  CHECK_THROWS_AS(n0_points(degenerate_form(), b), Error);
}

TEST_CASE("witness from a functional has traceless v and w parts") {
  Vec x(4);
  x << 1, 0, -1, 1;
  auto w = witness_from_functional(BasisTriple::identity(1, 1, 2), x);
  CHECK(w.D1.trace() > 0);
  CHECK(std::abs(w.D2.trace()) < 1e-12);
  CHECK(std::abs(w.D3.trace()) < 1e-12);
}

TEST_CASE("degenerate form is degenerate with the expected witness") {
  auto v = verdict(degenerate_form(), quick());
  REQUIRE(v.status == VerdictStatus::Degenerate);
  REQUIRE(v.witness);
  REQUIRE(v.decay);
  CHECK(v.decay->accepted);
  CHECK(v.decay->slope == doctest::Approx(-2.0 / 3.0).epsilon(0.02));
  // Up to scaling of the functional: D2 = 0 and D3 has eigenvalues of opposite sign.
  const auto& w = *v.witness;
  CHECK(w.D2.norm() < 1e-9);
  Eigen::SelfAdjointEigenSolver<Mat> es(w.D3);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-es.eigenvalues()(1)));
  CHECK(es.eigenvalues()(1) / w.D1(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("witness_check along a hand-built flow") {
  // Flow u -> e^t u, w1 -> e^-t w1, w2 -> e^t w2 with Q(u, v, w1) = 1.
  Vec x(4);
  x << 1, 0, -1, 1;
  auto w = witness_from_functional(BasisTriple::identity(1, 1, 2), x);
  auto rep = witness_check(degenerate_form(), w, default_tau_grid(10.0, 21));
  // Q ~ sqrt(1 + 1 * e^{0}) stays constant while det_u^{s} grows like e^{2t/3}.
  CHECK(rep.slope == doctest::Approx(-2.0 / 3.0).epsilon(1e-3));
  CHECK(rep.accepted);
}

TEST_CASE("nondegenerate form yields a valid certificate") {
  auto v = verdict(nondegenerate_form(), quick());
  REQUIRE(v.status == VerdictStatus::Nondegenerate);
  REQUIRE_FALSE(v.certificate.empty());
  auto os = main_scaling_point(2, 1, 2);
  for (const auto& e : v.certificate) {
    double total = 0;
    Vec centroid = Vec::Zero(5);
    for (std::size_t i = 0; i < e.triples.size(); ++i) {
      total += e.weights[i];
      auto f = e.triples[i].flat();
      for (int r = 0; r < 5; ++r) centroid(r) += e.weights[i] * f[r];
      CHECK(std::abs(e.coefficients[i]) > 0);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK((centroid - os.approx).cwiseAbs().maxCoeff() < 1e-9);
  }
  CHECK(v.stats.min_margin > 1e-3);
}

TEST_CASE("zero form is degenerate") {
  auto v = verdict(TrilinearForm(1, 1, 2), quick());
  CHECK(v.status == VerdictStatus::Degenerate);
}

TEST_CASE("verdict does not depend on the thread count") {
  auto a = verdict(nondegenerate_form(), quick(1));
  auto b = verdict(nondegenerate_form(), quick(4));
  CHECK(a.status == b.status);
  CHECK(a.margins == b.margins);
  CHECK(a.stats.min_margin == b.stats.min_margin);
}

TEST_CASE("sobol bases are orthonormal and reproducible") {
  auto a = sobol_bases(2, 1, 2, 8, 5);
  auto b = sobol_bases(2, 1, 2, 8, 5);
  REQUIRE(a.size() == 8);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].orthonormal());
    CHECK(a[i].u.matrix() == b[i].u.matrix());
  }
}

TEST_CASE("normalized ratio of the nondegenerate form stays bounded below") {
  auto Q = nondegenerate_form();
  double inf = infimum_ratio(Q);
  CHECK(inf > 1.0);
  CHECK(inf <= std::exp(min_log_ratio_over_scalings(Q, BasisTriple::identity(2, 1, 2))) + 1e-9);
  std::mt19937_64 g(59);
  for (int i = 0; i < 200; ++i) {
    BasisTriple b(VectorList(gaussian(g, 2, 2)), VectorList(gaussian(g, 1, 1)), VectorList(gaussian(g, 2, 2)));
    CHECK(normalized_ratio(Q, b) >= 0.99 * inf);
  }
}

TEST_CASE("stability margin") {
  auto rep = stability_margin(nondegenerate_form(), 0.05, quick());
  CHECK(rep.c0 > 0);
  CHECK(rep.largest_stable_radius > 0);
  CHECK_THROWS_AS(stability_margin(degenerate_form(), 0.05, quick()), Error);
}

}
