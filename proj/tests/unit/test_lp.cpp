#include "doctest.h"

#include "lp.hpp"

using namespace curvnd;

TEST_SUITE("lp") {

TEST_CASE("small LP in doubles") {
  // min -x - y, x + 2y + s1 = 4, 3x + y + s2 = 6: optimum at (1.6, 1.2).
  lp::Problem<double> p;
  p.resize(2, 4);
  p.at(0, 0) = 1; p.at(0, 1) = 2; p.at(0, 2) = 1;
  p.at(1, 0) = 3; p.at(1, 1) = 1; p.at(1, 3) = 1;
  p.b = {4, 6};
  p.c = {-1, -1, 0, 0};
  auto s = lp::solve(p);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.x[0] == doctest::Approx(1.6));
  CHECK(s.x[1] == doctest::Approx(1.2));
  CHECK(s.objective == doctest::Approx(-2.8));
}

TEST_CASE("exact rational solution") {
  lp::Problem<mpq_class> p;
  p.resize(2, 4);
  p.at(0, 0) = 1; p.at(0, 1) = 2; p.at(0, 2) = 1;
  p.at(1, 0) = 3; p.at(1, 1) = 1; p.at(1, 3) = 1;
  p.b = {4, 6};
  p.c = {-1, -1, 0, 0};
  auto s = lp::solve(p);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.x[0] == mpq_class(8, 5));
  CHECK(s.x[1] == mpq_class(6, 5));
}

TEST_CASE("infeasible and unbounded") {
  lp::Problem<double> p;
  p.resize(1, 1);
  p.at(0, 0) = 1;
  p.b = {-1};
  CHECK(lp::solve(p).status == lp::Status::Infeasible);

  lp::Problem<double> q;
  q.resize(1, 2);
  q.at(0, 0) = 1;
  q.at(0, 1) = -1;
  q.b = {0};
  q.c = {-1, 0};
  CHECK(lp::solve(q).status == lp::Status::Unbounded);
}

TEST_CASE("degenerate LP terminates") {
  // Many redundant constraints through one vertex.
  lp::Problem<double> p;
  p.resize(3, 5);
  p.at(0, 0) = 1; p.at(0, 1) = 1; p.at(0, 2) = 1;
  p.at(1, 0) = 2; p.at(1, 1) = 2; p.at(1, 3) = 1;
  p.at(2, 0) = 1; p.at(2, 1) = -1; p.at(2, 4) = 1;
  p.b = {0, 0, 0};
  p.c = {-1, -1, 0, 0, 0};
  auto s = lp::solve(p);
  CHECK(s.status == lp::Status::Optimal);
  CHECK(s.objective == doctest::Approx(0.0));
}

}
