#include "radonmap.hpp"

#include "error.hpp"

#include <cmath>

namespace curvnd {

PolynomialMap::PolynomialMap(int n, int d1, std::vector<Polynomial<double>> components)
    : n_(n), d1_(d1), comp_(std::move(components)) {
  if (n < 1 || d1 < 0) fail(Errc::BadDimensions, "polynomial map: need n >= 1 and d1 >= 0");
  if (comp_.empty()) fail(Errc::BadDimensions, "polynomial map: no components");
  for (const auto& c : comp_) {
    if (c.nvars() != n + d1) fail(Errc::DimensionMismatch, "polynomial map: component variable count");
    for (const auto& [e, v] : c.terms())
      if (!std::isfinite(v)) fail(Errc::InvalidArgument, "polynomial map: non-finite coefficient");
    degree_ = std::max(degree_, c.degree());
  }
  if (degree_ > kDefaultDegreeCap) fail(Errc::InvalidArgument, "polynomial map: degree exceeds cap");
}

std::vector<double> PolynomialMap::point(const Vec& x, const Vec& t) const {
  if (x.size() != n_ || t.size() != d1_) fail(Errc::DimensionMismatch, "polynomial map: point dimension mismatch");
  std::vector<double> p(n_ + d1_);
  for (int i = 0; i < n_; ++i) p[i] = x(i);
  for (int i = 0; i < d1_; ++i) p[n_ + i] = t(i);
  return p;
}

Vec PolynomialMap::eval(const Vec& x, const Vec& t) const {
  auto p = point(x, t);
  Vec r(k());
  for (int j = 0; j < k(); ++j) r(j) = comp_[j].eval(p);
  return r;
}

Mat PolynomialMap::jacobian_x(const Vec& x, const Vec& t) const {
  auto p = point(x, t);
  Mat J(k(), n_);
  for (int j = 0; j < k(); ++j)
    for (int l = 0; l < n_; ++l) J(j, l) = comp_[j].derivative(l).eval(p);
  return J;
}

Mat PolynomialMap::jacobian_t(const Vec& x, const Vec& t) const {
  auto p = point(x, t);
  Mat J(k(), d1_);
  for (int j = 0; j < k(); ++j)
    for (int i = 0; i < d1_; ++i) J(j, i) = comp_[j].derivative(n_ + i).eval(p);
  return J;
}

std::vector<Mat> PolynomialMap::mixed_hessian(const Vec& x, const Vec& t) const {
  auto p = point(x, t);
  std::vector<Mat> H(d1_, Mat(k(), n_));
  for (int j = 0; j < k(); ++j)
    for (int l = 0; l < n_; ++l) {
      Polynomial<double> dx = comp_[j].derivative(l);
      for (int i = 0; i < d1_; ++i) H[i](j, l) = dx.derivative(n_ + i).eval(p);
    }
  return H;
}

QExtraction extract_q(const PolynomialMap& phi, const BasePoint& p) {
  if (phi.d1() < 1) fail(Errc::BadDimensions, "extract_q: need d1 >= 1");
  QExtraction out;
  out.Dx = phi.jacobian_x(p.x, p.t);
  out.kernel = kernel_onb(out.Dx).matrix();
  const int d1 = phi.d1(), k = phi.k(), d = static_cast<int>(out.kernel.cols());
  auto H = phi.mixed_hessian(p.x, p.t);
  std::vector<double> c(static_cast<std::size_t>(d1) * k * d);
  for (int i = 0; i < d1; ++i) {
    Mat block = H[i] * out.kernel;  // k x d
    for (int ip = 0; ip < k; ++ip)
      for (int ipp = 0; ipp < d; ++ipp) c[(static_cast<std::size_t>(i) * k + ip) * d + ipp] = block(ip, ipp);
  }
  out.Q = TrilinearForm(d1, k, d, std::move(c));
  return out;
}

ExponentSet best_exponents(int n, int k, int d1) {
  if (!(n > k && k >= 1 && d1 >= 1)) fail(Errc::BadDimensions, "best_exponents: need n > k >= 1 and d1 >= 1");
  const int d = n - k, n1 = d1 + k;
  ExponentSet e;
  e.p = mpq_class(k * d, n * d1) + 1;
  e.q = mpq_class(n1 * d, k * d1) + 1;
  e.p_dual = mpq_class(n * d1, k * d) + 1;
  e.q_dual = mpq_class(k * d1, n1 * d) + 1;
  for (mpq_class* v : {&e.p, &e.q, &e.p_dual, &e.q_dual}) v->canonicalize();
  return e;
}

PolynomialMap defining_function(const PolynomialMap& phi) {
  const int n = phi.n(), d1 = phi.d1(), k = phi.k(), n1 = d1 + k;
  std::vector<Polynomial<double>> comps;
  for (int j = 0; j < k; ++j) {
    Polynomial<double> pi(n + n1);
    for (const auto& [e, c] : phi[j].terms()) {
      std::vector<int> f(n + n1, 0);
      std::copy(e.begin(), e.end(), f.begin());
      pi.add_term(f, c);
    }
    pi = pi - Polynomial<double>::variable(n + n1, n + d1 + j);
    comps.push_back(std::move(pi));
  }
  return PolynomialMap(n, n1, std::move(comps));
}

double coarea_identity_check(const PolynomialMap& phi, const std::vector<CoareaSample>& samples) {
  const int d1 = phi.d1(), k = phi.k();
  double worst = 0.0;
  for (const auto& s : samples) {
    Mat A = phi.jacobian_t(s.x, s.t);  // k x d1
    Mat Dg(d1 + k, d1);
    Dg << Mat::Identity(d1, d1), A;
    Mat Dp(k, d1 + k);
    Dp << A, -Mat::Identity(k, k);
    double lhs = (Dg.transpose() * Dg).determinant();
    double rhs = (Dp * Dp.transpose()).determinant();
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
  }
  return worst;
}

ModelMap model_map(const PolynomialMap& phi, const BasePoint& p) {
  QExtraction qe = extract_q(phi, p);
  const int k = phi.k(), n = phi.n(), d = n - k;
  const Mat& Dx = qe.Dx;
  // Polar factor of D_x phi^T spans the complement of the kernel.
  Eigen::SelfAdjointEigenSolver<Mat> es(Dx * Dx.transpose());
  Mat inv_sqrt = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                 es.eigenvectors().transpose();
  Mat Y = Dx.transpose() * inv_sqrt;
  ModelMap m;
  m.rotation = Mat(n, n);
  m.rotation << qe.kernel, Y;
  m.M = Dx * Y;
  m.theta = qe.Q;
  m.normalized = (m.M - Mat::Identity(k, k)).norm() <= 1e-12;
  Mat Minv = m.M.inverse();
  std::vector<double> c(qe.Q.coeffs().size());
  for (int i = 0; i < qe.Q.d1(); ++i)
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < d; ++b) {
        double s = 0.0;
        for (int j = 0; j < k; ++j) s += Minv(a, j) * qe.Q(i, j, b);
        c[(static_cast<std::size_t>(i) * k + a) * d + b] = s;
      }
  m.theta_norm = m.normalized ? qe.Q : TrilinearForm(qe.Q.d1(), k, d, std::move(c));
  return m;
}

HormanderReport hormander_check(const PolynomialMap& phi, const BasePoint& p) {
  QExtraction qe = extract_q(phi, p);
  const int d1 = phi.d1(), k = phi.k(), d = static_cast<int>(qe.kernel.cols());
  // Brackets [X_i, T_j] contribute D_t D_x phi applied to kernel vectors, in the
  // k directions transverse to the span of the X_i and T_j.
  Mat B(k, d1 * d);
  for (int j = 0; j < d1; ++j)
    for (int i = 0; i < d; ++i)
      for (int a = 0; a < k; ++a) B(a, j * d + i) = qe.Q(j, a, i);
  int r = 0;
  if (B.size() > 0 && B.norm() > 0.0) {
    Eigen::JacobiSVD<Mat> svd(B);
    Vec s = svd.singularValues();
    for (int i = 0; i < s.size(); ++i)
      if (s(i) > kRankTol * s(0)) ++r;
  }
  HormanderReport rep;
  rep.dimension = d + d1 + r;
  rep.target = phi.n() + d1;
  rep.spans = rep.dimension == rep.target;
  return rep;
}

}  // namespace curvnd
