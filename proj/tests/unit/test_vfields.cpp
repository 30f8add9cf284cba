#include "doctest.h"
#include "helpers.hpp"

#include "error.hpp"
#include "radonmap.hpp"
#include "vfields.hpp"

using namespace curvnd;
using namespace testutil;

namespace {

QPoly var(int nv, int i) { return QPoly::variable(nv, i); }
QPoly cst(int nv, int c) { return QPoly::constant(nv, mpq_class(c)); }

std::vector<RationalFunction> corpus(const char* name) { return exact_components(parse_map(data(name))); }

}  // namespace

TEST_SUITE("vfields") {

TEST_CASE("rational arithmetic evaluates like doubles") {
  RationalFunction f(var(2, 0) + cst(2, 1), var(2, 1) - cst(2, 2));
  RationalFunction g(var(2, 0) * var(2, 1));
  std::vector<double> x{0.3, 0.7};
  double fx = 1.3 / (0.7 - 2), gx = 0.21;
  CHECK((f + g).eval(x) == doctest::Approx(fx + gx));
  CHECK((f * g).eval(x) == doctest::Approx(fx * gx));
  CHECK((f / g).eval(x) == doctest::Approx(fx / gx));
  CHECK((f - f).is_zero());
  CHECK((f / f).equals_constant(1));
  CHECK_THROWS_AS(f.eval({0.0, 2.0}), Error);
}

TEST_CASE("rational derivative matches finite differences") {
  RationalFunction f(var(2, 0) * var(2, 0) + var(2, 1), var(2, 0) + cst(2, 3));
  std::vector<double> x{0.4, -0.2};
  const double h = 1e-6;
  for (int v = 0; v < 2; ++v) {
    auto xp = x, xm = x;
    xp[v] += h;
    xm[v] -= h;
    CHECK(f.derivative(v).eval(x) == doctest::Approx((f.eval(xp) - f.eval(xm)) / (2 * h)).epsilon(1e-7));
  }
}

TEST_CASE("exact evaluation") {
  RationalFunction f(var(1, 0) + cst(1, 1), var(1, 0) * cst(1, 2));
  CHECK(f.eval_exact({mpq_class(1, 3)}) == mpq_class(2));
}

TEST_CASE("determinant of a polynomial matrix") {
  RationalFunction a(var(2, 0)), b(var(2, 1)), one(cst(2, 1));
  auto det = rational_det({{a, b}, {one, a}});
  CHECK(det.eval({2.0, 3.0}) == doctest::Approx(4 - 3));
}

TEST_CASE("first generation fields satisfy the Kronecker identity") {
  auto f = corpus("vf_circle.poly");
  auto probes = box_probes(2, 0, 0.5, 200, 1);
  auto choice = select_minor(f, probes);
  auto g = gen1_fields(f, choice.minor);
  for (int i = 0; i < 2; ++i)
    for (int l = 0; l < 2; ++l)
      CHECK(g.apply(i, f[choice.minor[l]]).equals_constant(i == l ? mpq_class(1, 2) : mpq_class(0)));
}

TEST_CASE("pipeline checks pass on both corpora") {
  for (const char* name : {"vf_circle.poly", "vf_mixed.poly"}) {
    auto f = corpus(name);
    auto m = parse_map(data(name));
    auto probes = box_probes(2, m.box->first, m.box->second, 500, 3);
    auto p = build_generations(f, 2, probes);
    auto r = verify_identities(p, probes);
    CHECK(r.pass);
    REQUIRE(r.generations.size() == 2);
    CHECK(r.generations[0].components == 9);
    CHECK(r.generations[1].components == 27);
    for (const auto& g : r.generations) {
      CHECK(g.kronecker_exact);
      CHECK(g.size1_exact);
      CHECK(g.sup_value <= 1 + 1e-9);
    }
  }
}

TEST_CASE("dependent components are rejected") {
  std::vector<RationalFunction> f{RationalFunction(var(2, 0)), RationalFunction(var(2, 0) * cst(2, 2))};
  CHECK_THROWS_AS(select_minor(f, box_probes(2, 0, 1, 50, 1)), Error);
}

TEST_CASE("Chebyshev subset keeps at least half the weight") {
  std::mt19937_64 g(73);
  std::exponential_distribution<double> e;
  std::vector<double> W(400, 1.0), jac(400);
  for (auto& j : jac) j = e(g);
  auto r = chebyshev_subset(W, jac, std::vector<bool>(400, true));
  CHECK(r.ratio >= 0.5);
  CHECK(r.ratio <= 1.0);
  CHECK_THROWS_AS(chebyshev_subset(W, jac, std::vector<bool>(400, false)), Error);
}

TEST_CASE("box probes stay in the box and repeat") {
  auto a = box_probes(3, -1, 2, 100, 9), b = box_probes(3, -1, 2, 100, 9);
  CHECK(a == b);
  for (const auto& p : a)
    for (double v : p) CHECK((v >= -1 && v <= 2));
}

TEST_CASE("maps with parameters are not valid vector-field input") {
  CHECK_THROWS_AS(exact_components(parse_map(data("degenerate.poly"))), Error);
}

TEST_CASE("parameter components are bounded on the box") {
  auto phi = parse_map(data("nondegenerate.poly"));
  auto f = parameter_components(phi, Vec::Zero(3), -0.5, 0.5);
  REQUIRE(f.size() >= 2);
  for (const auto& p : box_probes(2, -0.5, 0.5, 100, 2))
    for (const auto& c : f) CHECK(std::abs(c.eval(p)) <= 1.0);
}

}
