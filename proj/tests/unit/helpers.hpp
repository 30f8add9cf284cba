#pragma once

#include "multilinear.hpp"
#include "qcalc.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace testutil {

using curvnd::Mat;
using curvnd::Vec;

inline Mat gaussian(std::mt19937_64& g, int r, int c) {
  std::normal_distribution<double> n;
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = n(g);
  return m;
}

inline Mat orthogonal(std::mt19937_64& g, int n) {
  Eigen::HouseholderQR<Mat> qr(gaussian(g, n, n));
  return qr.householderQ() * Mat::Identity(n, n);
}

inline curvnd::TrilinearForm random_form(std::mt19937_64& g, int d1, int k, int d) {
  std::normal_distribution<double> n;
  std::vector<double> c(static_cast<std::size_t>(d1) * k * d);
  for (auto& x : c) x = n(g);
  return curvnd::TrilinearForm(d1, k, d, c);
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data(const std::string& name) { return slurp(std::string(TEST_DATA) + "/" + name); }

}  // namespace testutil
