#pragma once

#include "multilinear.hpp"
#include "polynomial.hpp"
#include "qcalc.hpp"

#include <gmpxx.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace curvnd {

inline constexpr int kDefaultDegreeCap = 20;

// phi: R^n x R^{d1} -> R^k. Polynomial variables are (x1..xn, t1..td1).
class PolynomialMap {
public:
  PolynomialMap() = default;
  PolynomialMap(int n, int d1, std::vector<Polynomial<double>> components);

  int n() const { return n_; }
  int d1() const { return d1_; }
  int k() const { return static_cast<int>(comp_.size()); }
  int nvars() const { return n_ + d1_; }
  int degree() const { return degree_; }
  const std::vector<Polynomial<double>>& components() const { return comp_; }
  const Polynomial<double>& operator[](int j) const { return comp_.at(j); }

  // Optional coordinate box [lo, hi]^nvars carried by the input file.
  std::optional<std::pair<double, double>> box;

  Vec eval(const Vec& x, const Vec& t) const;
  Mat jacobian_x(const Vec& x, const Vec& t) const;  // k x n
  Mat jacobian_t(const Vec& x, const Vec& t) const;  // k x d1
  // H[i](i', l) = d^2 phi^{i'} / dt^i dx^l.
  std::vector<Mat> mixed_hessian(const Vec& x, const Vec& t) const;

  bool operator==(const PolynomialMap& o) const { return n_ == o.n_ && d1_ == o.d1_ && comp_ == o.comp_ && box == o.box; }

private:
  std::vector<double> point(const Vec& x, const Vec& t) const;
  int n_ = 0, d1_ = 0;
  std::vector<Polynomial<double>> comp_;
  int degree_ = -1;
};

struct BasePoint {
  Vec x, t;
};

struct QExtraction {
  TrilinearForm Q;
  Mat kernel;  // n x d, columns are the kernel basis z_{i''}
  Mat Dx;      // k x n
};

QExtraction extract_q(const PolynomialMap& phi, const BasePoint& p);

struct ExponentSet {
  mpq_class p, q, p_dual, q_dual;
};

ExponentSet best_exponents(int n, int k, int d1);

// pi^j(x, y) = -y^{d1+j} + phi^j(x, y^1..y^{d1}); returned with d1 slot = n1 = d1 + k.
PolynomialMap defining_function(const PolynomialMap& phi);

struct CoareaSample {
  Vec x, t;
};
// max relative |det(I + A^T A) - det(I + A A^T)| with A = D_t phi.
double coarea_identity_check(const PolynomialMap& phi, const std::vector<CoareaSample>& samples);

struct ModelMap {
  Mat rotation;  // n x n, columns: kernel basis (x0) then range basis (x1)
  Mat M;         // k x k, D_x phi restricted to the x1 block
  TrilinearForm theta;       // Theta(t, x0)
  TrilinearForm theta_norm;  // M^{-1} Theta, model with M = I
  bool normalized = false;   // M was already the identity
};

ModelMap model_map(const PolynomialMap& phi, const BasePoint& p);

struct HormanderReport {
  int dimension = 0;
  int target = 0;
  bool spans = false;
};

HormanderReport hormander_check(const PolynomialMap& phi, const BasePoint& p);

// Text and JSON formats.
PolynomialMap parse_map_text(const std::string& text);
std::string map_to_text(const PolynomialMap& phi);
PolynomialMap parse_map_json(const std::string& text);
std::string map_to_json(const PolynomialMap& phi);
// Picks JSON when the first non-blank character is '{'.
PolynomialMap parse_map(const std::string& text);
std::string format_double(double v);

}  // namespace curvnd
