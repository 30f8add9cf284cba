#include "doctest.h"
#include "helpers.hpp"

#include "error.hpp"
#include "radonmap.hpp"

using namespace curvnd;
using namespace testutil;

namespace {

PolynomialMap random_map(std::mt19937_64& g, int n, int d1, int k, int degree) {
  std::uniform_int_distribution<int> e(0, degree);
  std::normal_distribution<double> c;
  std::vector<Polynomial<double>> comps;
  for (int j = 0; j < k; ++j) {
    Polynomial<double> p(n + d1);
    for (int term = 0; term < 6; ++term) {
      std::vector<int> ex(n + d1, 0);
      int left = degree;
      for (auto& x : ex) {
        x = std::min(left, e(g) / 2);
        left -= x;
      }
      p.add_term(ex, c(g));
    }
    comps.push_back(p);
  }
  return PolynomialMap(n, d1, comps);
}

}  // namespace

TEST_SUITE("radonmap") {

TEST_CASE("parse the degenerate example") {
  auto phi = parse_map(data("degenerate.poly"));
  CHECK(phi.n() == 3);
  CHECK(phi.d1() == 1);
  CHECK(phi.k() == 1);
  Vec x(3), t(1);
  x << 2, 3, 5;
  t << 7;
  CHECK(phi.eval(x, t)(0) == doctest::Approx(3 + 2 * 7));
}

TEST_CASE("text and JSON round trips") {
  std::mt19937_64 g(61);
  for (int i = 0; i < 10; ++i) {
    auto phi = random_map(g, 3, 2, 2, 4);
    CHECK(parse_map_text(map_to_text(phi)) == phi);
    CHECK(parse_map_json(map_to_json(phi)) == phi);
    CHECK(parse_map(map_to_json(phi)) == phi);
  }
  auto boxed = parse_map(data("vf_circle.poly"));
  REQUIRE(boxed.box);
  CHECK(boxed.box->second == 0.5);
  CHECK(parse_map(map_to_text(boxed)) == boxed);
}

TEST_CASE("parse errors carry the line") {
  try {
    parse_map_text("n = 2\nd1 = 1\nfoo = 3\nx1\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_map_text("n = 2\nd1 = 1\nx3\n"), Error);
  CHECK_THROWS_AS(parse_map_text("n = 2\nd1 = 1\nx1 +\n"), Error);
  CHECK_THROWS_AS(parse_map_json("{\"n\": 2}"), Error);
}

TEST_CASE("jacobians match finite differences") {
  std::mt19937_64 g(67);
  auto phi = random_map(g, 3, 2, 2, 3);
  Vec x = gaussian(g, 3, 1) * 0.5, t = gaussian(g, 2, 1) * 0.5;
  const double h = 1e-6;
  Mat Jx = phi.jacobian_x(x, t), Jt = phi.jacobian_t(x, t);
  for (int l = 0; l < 3; ++l) {
    Vec e = Vec::Unit(3, l) * h;
    Vec fd = (phi.eval(x + e, t) - phi.eval(x - e, t)) / (2 * h);
    CHECK((Jx.col(l) - fd).norm() < 1e-6);
  }
  for (int i = 0; i < 2; ++i) {
    Vec e = Vec::Unit(2, i) * h;
    Vec fd = (phi.eval(x, t + e) - phi.eval(x, t - e)) / (2 * h);
    CHECK((Jt.col(i) - fd).norm() < 1e-6);
  }
  auto H = phi.mixed_hessian(x, t);
  for (int i = 0; i < 2; ++i) {
    Vec e = Vec::Unit(2, i) * h;
    Mat fd = (phi.jacobian_x(x, t + e) - phi.jacobian_x(x, t - e)) / (2 * h);
    CHECK((H[i] - fd).norm() < 1e-6);
  }
}

TEST_CASE("Q of the degenerate example") {
  auto phi = parse_map(data("degenerate.poly"));
  auto qe = extract_q(phi, {Vec::Zero(3), Vec::Zero(1)});
  CHECK(qe.Q.d1() == 1);
  CHECK(qe.Q.k() == 1);
  CHECK(qe.Q.d() == 2);
  CHECK(qe.Q(0, 0, 0) == doctest::Approx(1.0));
  CHECK(qe.Q(0, 0, 1) == doctest::Approx(0.0));
  CHECK((qe.kernel.col(0) - Vec::Unit(3, 0)).norm() < 1e-12);
  CHECK((qe.kernel.col(1) - Vec::Unit(3, 2)).norm() < 1e-12);
}

TEST_CASE("Q of the nondegenerate example") {
  auto phi = parse_map(data("nondegenerate.poly"));
  auto qe = extract_q(phi, {Vec::Zero(3), Vec::Zero(2)});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(qe.Q(i, 0, j) == doctest::Approx(i == j ? 1.0 : 0.0));
}

TEST_CASE("vanishing x-derivative is rank deficient") {
  auto phi = parse_map(data("zero_jacobian.poly"));
  try {
    extract_q(phi, {Vec::Zero(2), Vec::Zero(1)});
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::RankDeficient);
  }
}

TEST_CASE("best exponents") {
  auto a = best_exponents(3, 1, 1);
  CHECK(a.p == mpq_class(5, 3));
  CHECK(a.q == 5);
  CHECK(a.p_dual == mpq_class(5, 2));
  auto b = best_exponents(3, 1, 2);
  CHECK(b.p == mpq_class(4, 3));
  CHECK(b.q == 4);
  CHECK(b.p_dual == 4);
  CHECK(b.q_dual == mpq_class(4, 3));
  CHECK_THROWS_AS(best_exponents(2, 2, 1), Error);
}

TEST_CASE("defining function carries the graph variables") {
  auto phi = parse_map(data("degenerate.poly"));
  auto pi = defining_function(phi);
  CHECK(pi.d1() == 2);
  Vec x(3), y(2);
  x << 1, 2, 3;
  y << 0.5, 4;
  // pi = -y2 + x2 + x1 y1
  CHECK(pi.eval(x, y)(0) == doctest::Approx(-4 + 2 + 0.5));
}

TEST_CASE("coarea identity on random maps") {
  std::mt19937_64 g(71);
  for (int i = 0; i < 5; ++i) {
    auto phi = random_map(g, 4, 2, 2, 4);
    std::vector<CoareaSample> s;
    for (int j = 0; j < 5; ++j) s.push_back({gaussian(g, 4, 1), gaussian(g, 2, 1)});
    CHECK(coarea_identity_check(phi, s) < 1e-9);
  }
}

TEST_CASE("model map of the degenerate example is already normalized") {
  auto phi = parse_map(data("degenerate.poly"));
  auto mm = model_map(phi, {Vec::Zero(3), Vec::Zero(1)});
  CHECK(mm.normalized);
  CHECK((mm.rotation.transpose() * mm.rotation - Mat::Identity(3, 3)).norm() < 1e-12);
  CHECK(mm.theta_norm(0, 0, 0) == doctest::Approx(1.0));
}

TEST_CASE("model map divides out M") {
  auto phi = parse_map_text("n = 2\nd1 = 1\n3 * x2 + x1 * t1\n");
  auto mm = model_map(phi, {Vec::Zero(2), Vec::Zero(1)});
  CHECK_FALSE(mm.normalized);
  CHECK(std::abs(mm.M(0, 0)) == doctest::Approx(3.0));
  CHECK(std::abs(mm.theta_norm(0, 0, 0)) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("spanning condition") {
  auto deg = hormander_check(parse_map(data("degenerate.poly")), {Vec::Zero(3), Vec::Zero(1)});
  CHECK(deg.dimension == 4);
  CHECK(deg.spans);
  auto nd = hormander_check(parse_map(data("nondegenerate.poly")), {Vec::Zero(3), Vec::Zero(2)});
  CHECK(nd.dimension == 5);
  CHECK(nd.spans);
  auto flat = hormander_check(parse_map_text("n = 3\nd1 = 1\nx2 + t1\n"), {Vec::Zero(3), Vec::Zero(1)});
  CHECK_FALSE(flat.spans);
}

}

TEST_SUITE("radonmap") {

TEST_CASE("downstream values do not depend on the kernel convention") {
  std::mt19937_64 g(89);
  auto phi = parse_map_text("n = 4\nd1 = 2\nx4 + t1 * x1 * x2 + t2 * x3 + t1 * x3 - x2 * t2\n");
  auto qe = extract_q(phi, {Vec::Zero(4), Vec::Zero(2)});
  Mat O = orthogonal(g, 3);
  // Rotating the kernel basis z -> z O changes Q to Q(., ., O .).
  auto rotated = qe.Q.in_bases(Mat::Identity(2, 2), Mat::Identity(1, 1), O);
  for (int i = 0; i < 5; ++i) {
    BasisTriple b(VectorList(orthogonal(g, 2)), VectorList(Mat::Identity(1, 1)), VectorList(orthogonal(g, 3)));
    BasisTriple br(b.u, b.v, VectorList(O.transpose() * b.w.matrix()));
    CHECK(script_q(rotated, br) == doctest::Approx(script_q(qe.Q, b)).epsilon(1e-10));
  }
}

}
