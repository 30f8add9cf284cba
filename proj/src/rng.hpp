#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>

namespace curvnd {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Independent generator for (seed, stream); the stream id is what makes
// chunked parallel loops reproducible at any thread count.
inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s))};
  return std::mt19937_64(seq);
}

template <class Rng>
Eigen::VectorXd gaussian_vector(Rng& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

template <class Rng>
Eigen::MatrixXd gaussian_matrix(Rng& rng, int r, int c) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd m(r, c);
  for (int j = 0; j < c; ++j)
    for (int i = 0; i < r; ++i) m(i, j) = g(rng);
  return m;
}

// Uniform point in the closed unit ball of R^n.
template <class Rng>
Eigen::VectorXd unit_ball_point(Rng& rng, int n) {
  if (n == 0) return Eigen::VectorXd(0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd v;
  double nv = 0.0;
  do {
    v = gaussian_vector(rng, n);
    nv = v.norm();
  } while (nv == 0.0);
  return v * (std::pow(u(rng), 1.0 / n) / nv);
}

// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, sign-fixed).
Eigen::MatrixXd orthogonal_from_gaussian(const Eigen::MatrixXd& g);

template <class Rng>
Eigen::MatrixXd random_orthogonal(Rng& rng, int n) {
  return orthogonal_from_gaussian(gaussian_matrix(rng, n, n));
}

}  // namespace curvnd
