#pragma once

#include "multiindex.hpp"
#include "multilinear.hpp"

#include <vector>

namespace curvnd {

// Real tensor Q[i][i'][i''] of shape d1 x k x d.
class TrilinearForm {
public:
  TrilinearForm() = default;
  TrilinearForm(int d1, int k, int d);
  TrilinearForm(int d1, int k, int d, std::vector<double> coeffs);

  int d1() const { return d1_; }
  int k() const { return k_; }
  int d() const { return d_; }
  double operator()(int i, int ip, int ipp) const { return c_[index(i, ip, ipp)]; }
  const std::vector<double>& coeffs() const { return c_; }
  double norm() const { return norm_; }
  bool is_zero() const { return norm_ == 0.0; }

  double eval(const Vec& u, const Vec& v, const Vec& w) const;
  // k x d matrix [Q(t, e_a, e_b)].
  Mat slice(const Vec& t) const;
  // Theta(t, w) in R^k with v . Theta(t, w) = Q(t, v, w).
  Vec theta(const Vec& t, const Vec& w) const;
  // Entries Q(u_a, v_b, w_c) for the columns of U, V, W.
  TrilinearForm in_bases(const Mat& U, const Mat& V, const Mat& W) const;

  TrilinearForm operator+(const TrilinearForm& o) const;
  TrilinearForm operator*(double s) const;

private:
  std::size_t index(int i, int ip, int ipp) const {
    return (static_cast<std::size_t>(i) * k_ + ip) * d_ + ipp;
  }
  int d1_ = 0, k_ = 0, d_ = 0;
  std::vector<double> c_;
  double norm_ = 0.0;
};

struct BasisTriple {
  VectorList u, v, w;
  double det_u = 1, det_v = 1, det_w = 1;

  BasisTriple() = default;
  BasisTriple(VectorList u, VectorList v, VectorList w);
  static BasisTriple identity(int d1, int k, int d);
  bool orthonormal(double tol = 1e-10) const;
};

// s = dk/n with n = d + k.
double scaling_order(int k, int d);

double qs_det(const TrilinearForm& Q, const Vec& t, const Mat& vs, const Mat& ws);

enum class CoefMethod { Auto, Permutation, Polarization };

// (u.grad)^alpha Q_s(t, v_beta, w_gamma) for Q already expressed in the
// bases (entries Qb(a,b,c) = Q(u_a, v_b, w_c)) and index sequences.
double coefficient_from_sequences(const TrilinearForm& Qb, const std::vector<int>& su,
                                  const std::vector<int>& sv, const std::vector<int>& sw,
                                  CoefMethod method = CoefMethod::Auto);

double derivative_coefficient(const TrilinearForm& Q, const BasisTriple& bases, const MultiindexTriple& triple,
                              CoefMethod method = CoefMethod::Auto);

struct DerivativeTable {
  std::vector<MultiindexTriple> triples;
  std::vector<double> values;
  double lookup(const MultiindexTriple& t) const;
};

DerivativeTable derivative_table(const TrilinearForm& Q, const BasisTriple& bases);

double script_q(const TrilinearForm& Q, const BasisTriple& bases);
double script_q_from_table(const DerivativeTable& table);
double script_q_sup(const TrilinearForm& Q, const BasisTriple& bases);

// Q / (|det u|^{s/d1} |det v|^{s/k} |det w|^{s/d}) with s = dk/n.
double normalized_ratio(const TrilinearForm& Q, const BasisTriple& bases);

struct InversionSides {
  double lhs = 0;  // mixed determinant sum with v and Theta(t, w) columns
  double rhs = 0;  // |det v|^2 * Q[u, v*, w]^2
};

InversionSides inversion_identity(const TrilinearForm& Q, const BasisTriple& bases);

}  // namespace curvnd
