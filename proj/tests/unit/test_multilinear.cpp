#include "doctest.h"
#include "helpers.hpp"

#include "error.hpp"

using namespace curvnd;
using namespace testutil;

TEST_SUITE("multilinear") {

TEST_CASE("volume of two vectors in R3 is the cross product length") {
  Mat m(3, 2);
  m << 1, 0, 2, 1, 0, 3;
  Eigen::Vector3d a = m.col(0), b = m.col(1);
  CHECK(VectorList(m).volume() == doctest::Approx(a.cross(b).norm()).epsilon(1e-12));
}

TEST_CASE("square volume is the absolute determinant") {
  std::mt19937_64 g(3);
  Mat m = gaussian(g, 4, 4);
  CHECK(VectorList(m).volume() == doctest::Approx(std::abs(m.determinant())).epsilon(1e-12));
}

TEST_CASE("dependent vectors are flagged") {
  Mat m(3, 2);
  m << 1, 2, 1, 2, 1, 2;
  CHECK_FALSE(VectorList(m).independent());
  CHECK_THROWS_AS(orthogonalize_preserving(VectorList(m)), Error);
}

TEST_CASE("orthogonalize_preserving gives an equivalent orthogonal frame") {
  std::mt19937_64 g(11);
  for (int trial = 0; trial < 20; ++trial) {
    Mat m = gaussian(g, 5, 3);
    VectorList v(m);
    VectorList w = orthogonalize_preserving(v);
    Mat gram = w.matrix().transpose() * w.matrix();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) CHECK(std::abs(gram(i, j)) < 1e-10 * gram.norm());
    auto cmp = frame_equivalent(v, w);
    CHECK(cmp.equivalent);
    CHECK(cmp.orthogonality_residual < 1e-10);
  }
}

TEST_CASE("frame_equivalent rejects a rescaled frame with a probe") {
  std::mt19937_64 g(5);
  Mat m = gaussian(g, 3, 3);
  Mat m2 = m;
  m2.col(0) *= 2.0;
  auto cmp = frame_equivalent(VectorList(m), VectorList(m2));
  CHECK_FALSE(cmp.equivalent);
  Vec l = cmp.probe;
  double lhs = (m.transpose() * l).squaredNorm();
  double rhs = (m2.transpose() * l).squaredNorm();
  CHECK(cmp.lhs == doctest::Approx(lhs));
  CHECK(cmp.rhs == doctest::Approx(rhs));
  CHECK(std::abs(lhs - rhs) > 1e-6);
}

TEST_CASE("realign_basis honours the chain and preserves the frame") {
  std::mt19937_64 g(17);
  Mat m = gaussian(g, 4, 4);
  VectorList v(m);
  Mat v2 = orthonormal_span(m.leftCols(2));
  Mat v1 = orthonormal_span(m.col(1));
  SubspaceChain chain({orthonormal_span(m), v2, v1});
  VectorList r = realign_basis(v, chain);
  CHECK(frame_equivalent(v, r).equivalent);
  // Last vector lies in V_3, last two in V_2.
  Mat P1 = v1 * v1.transpose();
  CHECK((P1 * r[3] - r[3]).norm() < 1e-10);
  Mat P2 = v2 * v2.transpose();
  CHECK((P2 * r[2] - r[2]).norm() < 1e-10);
}

TEST_CASE("chain outside the span is rejected") {
  Mat m(3, 2);
  m << 1, 0, 0, 1, 0, 0;
  Mat out(3, 1);
  out << 0, 0, 1;
  CHECK_THROWS_AS(realign_basis(VectorList(m), SubspaceChain({m, out})), Error);
}

TEST_CASE("frame_sum for a linear functional equals the quadratic form") {
  std::mt19937_64 g(23);
  Mat m = gaussian(g, 4, 3);
  Vec l = gaussian(g, 4, 1);
  std::vector<double> L(l.data(), l.data() + 4);
  double oracle = 0;
  for (int i = 0; i < 3; ++i) oracle += std::pow(l.dot(m.col(i)), 2);
  CHECK(frame_sum(VectorList(m), L, 1) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("frame_sum is preserved under realign and orthogonalize") {
  std::mt19937_64 g(29);
  for (int m = 1; m <= 5; ++m)
    for (int trial = 0; trial < 10; ++trial) {
      Mat V = gaussian(g, m, m);
      std::vector<double> L(m * m);
      for (auto& x : L) x = std::normal_distribution<double>()(g);
      double base = frame_sum(VectorList(V), L, 2);
      double o = frame_sum(orthogonalize_preserving(VectorList(V)), L, 2);
      CHECK(std::abs(o - base) <= 1e-10 * std::max(1.0, base));
      SubspaceChain chain({Mat::Identity(m, m), orthonormal_span(V.col(0))});
      double r = frame_sum(realign_basis(VectorList(V), chain), L, 2);
      CHECK(std::abs(r - base) <= 1e-10 * std::max(1.0, base));
    }
}

TEST_CASE("dual basis pairs to the identity") {
  std::mt19937_64 g(31);
  Mat m = gaussian(g, 4, 4);
  VectorList dual = dual_basis(VectorList(m));
  CHECK((dual.matrix().transpose() * m - Mat::Identity(4, 4)).norm() < 1e-10);
  CHECK_THROWS_AS(dual_basis(VectorList(Mat::Zero(2, 2))), Error);
}

TEST_CASE("kernel basis is orthonormal and annihilated") {
  std::mt19937_64 g(37);
  Mat M = gaussian(g, 2, 5);
  VectorList K = kernel_onb(M);
  CHECK(K.size() == 3);
  CHECK((M * K.matrix()).norm() < 1e-10);
  CHECK(K.orthonormal());
}

TEST_CASE("kernel basis of a coordinate map is canonical") {
  Mat M(1, 3);
  M << 0, 1, 0;
  Mat K = kernel_onb(M).matrix();
  CHECK((K.col(0) - Vec::Unit(3, 0)).norm() < 1e-12);
  CHECK((K.col(1) - Vec::Unit(3, 2)).norm() < 1e-12);
}

TEST_CASE("rank deficient input to kernel_onb") {
  Mat M = Mat::Zero(2, 4);
  M(0, 0) = 1;
  M(1, 0) = 2;
  CHECK_THROWS_AS(kernel_onb(M), Error);
}

}
