#include "qcalc.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace curvnd {

TrilinearForm::TrilinearForm(int d1, int k, int d)
    : d1_(d1), k_(k), d_(d), c_(static_cast<std::size_t>(d1) * k * d, 0.0) {
  if (d1 < 0 || k < 0 || d < 0) fail(Errc::DimensionMismatch, "TrilinearForm: negative dimension");
}

TrilinearForm::TrilinearForm(int d1, int k, int d, std::vector<double> coeffs)
    : d1_(d1), k_(k), d_(d), c_(std::move(coeffs)) {
  if (c_.size() != static_cast<std::size_t>(d1) * k * d)
    fail(Errc::DimensionMismatch, "TrilinearForm: coefficient count");
  double s = 0.0;
  for (double x : c_) {
    if (!std::isfinite(x)) fail(Errc::InvalidArgument, "TrilinearForm: non-finite coefficient");
    s += x * x;
  }
  norm_ = std::sqrt(s);
}

double TrilinearForm::eval(const Vec& u, const Vec& v, const Vec& w) const {
  if (u.size() != d1_ || v.size() != k_ || w.size() != d_) fail(Errc::DimensionMismatch, "Q(u,v,w)");
  double s = 0.0;
  for (int i = 0; i < d1_; ++i)
    for (int a = 0; a < k_; ++a)
      for (int b = 0; b < d_; ++b) s += c_[index(i, a, b)] * u(i) * v(a) * w(b);
  return s;
}

Mat TrilinearForm::slice(const Vec& t) const {
  if (t.size() != d1_) fail(Errc::DimensionMismatch, "Q slice");
  Mat m = Mat::Zero(k_, d_);
  for (int i = 0; i < d1_; ++i)
    for (int a = 0; a < k_; ++a)
      for (int b = 0; b < d_; ++b) m(a, b) += t(i) * c_[index(i, a, b)];
  return m;
}

Vec TrilinearForm::theta(const Vec& t, const Vec& w) const { return slice(t) * w; }

TrilinearForm TrilinearForm::in_bases(const Mat& U, const Mat& V, const Mat& W) const {
  if (U.rows() != d1_ || V.rows() != k_ || W.rows() != d_) fail(Errc::DimensionMismatch, "in_bases");
  const int nu = static_cast<int>(U.cols()), nv = static_cast<int>(V.cols()), nw = static_cast<int>(W.cols());
  // Contract one slot at a time.
  std::vector<double> a(static_cast<std::size_t>(nu) * k_ * d_, 0.0);
  for (int p = 0; p < nu; ++p)
    for (int i = 0; i < d1_; ++i) {
      double c = U(i, p);
      if (c == 0.0) continue;
      for (int j = 0; j < k_ * d_; ++j) a[p * k_ * d_ + j] += c * c_[i * k_ * d_ + j];
    }
  std::vector<double> b(static_cast<std::size_t>(nu) * nv * d_, 0.0);
  for (int p = 0; p < nu; ++p)
    for (int q = 0; q < nv; ++q)
      for (int j = 0; j < k_; ++j) {
        double c = V(j, q);
        if (c == 0.0) continue;
        for (int l = 0; l < d_; ++l) b[(p * nv + q) * d_ + l] += c * a[(p * k_ + j) * d_ + l];
      }
  std::vector<double> out(static_cast<std::size_t>(nu) * nv * nw, 0.0);
  for (int pq = 0; pq < nu * nv; ++pq)
    for (int r = 0; r < nw; ++r) {
      double s = 0.0;
      for (int l = 0; l < d_; ++l) s += W(l, r) * b[pq * d_ + l];
      out[pq * nw + r] = s;
    }
  return TrilinearForm(nu, nv, nw, std::move(out));
}

TrilinearForm TrilinearForm::operator+(const TrilinearForm& o) const {
  if (o.d1_ != d1_ || o.k_ != k_ || o.d_ != d_) fail(Errc::DimensionMismatch, "Q + Q'");
  std::vector<double> c(c_);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c_[i];
  return TrilinearForm(d1_, k_, d_, std::move(c));
}

TrilinearForm TrilinearForm::operator*(double s) const {
  std::vector<double> c(c_);
  for (double& x : c) x *= s;
  return TrilinearForm(d1_, k_, d_, std::move(c));
}

BasisTriple::BasisTriple(VectorList u_, VectorList v_, VectorList w_)
    : u(std::move(u_)), v(std::move(v_)), w(std::move(w_)) {
  for (const VectorList* l : {&u, &v, &w}) {
    if (l->dim() != l->size()) fail(Errc::DimensionMismatch, "BasisTriple: each list must be a square basis");
    if (l->size() > 0 && !l->independent()) fail(Errc::SingularBasis, "BasisTriple: singular basis");
  }
  det_u = u.volume();
  det_v = v.volume();
  det_w = w.volume();
}

BasisTriple BasisTriple::identity(int d1, int k, int d) {
  return BasisTriple(VectorList::identity(d1), VectorList::identity(k), VectorList::identity(d));
}

bool BasisTriple::orthonormal(double tol) const {
  return u.orthonormal(tol) && v.orthonormal(tol) && w.orthonormal(tol);
}

double scaling_order(int k, int d) { return static_cast<double>(d) * k / (d + k); }

double qs_det(const TrilinearForm& Q, const Vec& t, const Mat& vs, const Mat& ws) {
  const int s = static_cast<int>(vs.cols());
  if (ws.cols() != s || s < 1 || s > std::min(Q.k(), Q.d()))
    fail(Errc::DimensionMismatch, "qs_det: need 1 <= s <= min(d,k) vectors in each slot");
  if (vs.rows() != Q.k() || ws.rows() != Q.d() || t.size() != Q.d1())
    fail(Errc::DimensionMismatch, "qs_det: vector lengths");
  Mat m = vs.transpose() * Q.slice(t) * ws;
  return m.determinant();
}

namespace {

double det_small(Mat& m) {
  switch (m.rows()) {
    case 0: return 1.0;
    case 1: return m(0, 0);
    case 2: return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    default: return m.partialPivLu().determinant();
  }
}

double by_permutation(const TrilinearForm& Qb, const std::vector<int>& su, const std::vector<int>& sv,
                      const std::vector<int>& sw) {
  const int s = static_cast<int>(su.size());
  std::vector<int> perm(s);
  std::iota(perm.begin(), perm.end(), 0);
  Mat m(s, s);
  double total = 0.0;
  do {
    for (int a = 0; a < s; ++a)
      for (int b = 0; b < s; ++b) m(a, b) = Qb(su[perm[a]], sv[a], sw[b]);
    total += det_small(m);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// Exact for a degree-s homogeneous polynomial: the mixed derivative equals the
// alternating sum of its values at subset sums of the directions.
double by_polarization(const TrilinearForm& Qb, const std::vector<int>& su, const std::vector<int>& sv,
                       const std::vector<int>& sw) {
  const int s = static_cast<int>(su.size());
  Mat m(s, s);
  double total = 0.0;
  for (unsigned mask = 1; mask < (1u << s); ++mask) {
    m.setZero();
    for (int j = 0; j < s; ++j) {
      if (!(mask & (1u << j))) continue;
      for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) m(a, b) += Qb(su[j], sv[a], sw[b]);
    }
    int pop = __builtin_popcount(mask);
    double sign = ((s - pop) % 2 == 0) ? 1.0 : -1.0;
    total += sign * det_small(m);
  }
  return total;
}

}  // namespace

double coefficient_from_sequences(const TrilinearForm& Qb, const std::vector<int>& su, const std::vector<int>& sv,
                                  const std::vector<int>& sw, CoefMethod method) {
  const std::size_t s = su.size();
  if (sv.size() != s || sw.size() != s) fail(Errc::DimensionMismatch, "derivative coefficient: order mismatch");
  if (s == 0) return 1.0;
  if (s > static_cast<std::size_t>(std::min(Qb.k(), Qb.d()))) return 0.0;
  if (method == CoefMethod::Auto) method = s <= 3 ? CoefMethod::Permutation : CoefMethod::Polarization;
  return method == CoefMethod::Permutation ? by_permutation(Qb, su, sv, sw) : by_polarization(Qb, su, sv, sw);
}

double derivative_coefficient(const TrilinearForm& Q, const BasisTriple& bases, const MultiindexTriple& triple,
                              CoefMethod method) {
  if (static_cast<int>(triple.alpha.size()) != Q.d1() || static_cast<int>(triple.beta.size()) != Q.k() ||
      static_cast<int>(triple.gamma.size()) != Q.d() || !triple.valid())
    fail(Errc::DimensionMismatch, "derivative_coefficient: triple shape");
  if (bases.u.dim() != Q.d1() || bases.v.dim() != Q.k() || bases.w.dim() != Q.d())
    fail(Errc::DimensionMismatch, "derivative_coefficient: bases shape");
  if (triple.order() > std::min(Q.k(), Q.d())) fail(Errc::DimensionMismatch, "derivative_coefficient: order");
  TrilinearForm Qb = Q.in_bases(bases.u.matrix(), bases.v.matrix(), bases.w.matrix());
  return coefficient_from_sequences(Qb, expand(triple.alpha), expand(triple.beta), expand(triple.gamma), method);
}

double DerivativeTable::lookup(const MultiindexTriple& t) const {
  auto it = std::lower_bound(triples.begin(), triples.end(), t);
  if (it == triples.end() || !(*it == t)) fail(Errc::InvalidArgument, "DerivativeTable: missing triple " + t.str());
  return values[static_cast<std::size_t>(it - triples.begin())];
}

DerivativeTable derivative_table(const TrilinearForm& Q, const BasisTriple& bases) {
  if (bases.u.dim() != Q.d1() || bases.v.dim() != Q.k() || bases.w.dim() != Q.d())
    fail(Errc::DimensionMismatch, "derivative_table: bases shape");
  TrilinearForm Qb = Q.in_bases(bases.u.matrix(), bases.v.matrix(), bases.w.matrix());
  DerivativeTable t;
  t.triples = all_triples(Q.d1(), Q.k(), Q.d(), std::min(Q.k(), Q.d()));
  std::sort(t.triples.begin(), t.triples.end());
  t.values.reserve(t.triples.size());
  for (const auto& tr : t.triples)
    t.values.push_back(coefficient_from_sequences(Qb, expand(tr.alpha), expand(tr.beta), expand(tr.gamma)));
  return t;
}

double script_q_from_table(const DerivativeTable& table) {
  double s = 1.0;
  for (std::size_t i = 0; i < table.triples.size(); ++i) {
    double c = table.values[i];
    if (c == 0.0) continue;
    const auto& tr = table.triples[i];
    s += std::exp(log_multinomial_weight(tr.alpha, tr.beta, tr.gamma) + 2.0 * std::log(std::abs(c)));
  }
  return std::sqrt(s);
}

double script_q(const TrilinearForm& Q, const BasisTriple& bases) {
  return script_q_from_table(derivative_table(Q, bases));
}

namespace {

std::vector<std::vector<int>> increasing_tuples(int n, int s) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == s) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<std::vector<int>> ordered_tuples(int n, int s) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(s, 0);
  if (s == 0) {
    out.push_back(cur);
    return out;
  }
  while (true) {
    out.push_back(cur);
    int p = s - 1;
    while (p >= 0 && ++cur[p] == n) cur[p--] = 0;
    if (p < 0) break;
  }
  return out;
}

double factorial(int n) { return std::exp(log_factorial(n)); }

}  // namespace

double script_q_sup(const TrilinearForm& Q, const BasisTriple& bases) {
  if (bases.u.dim() != Q.d1() || bases.v.dim() != Q.k() || bases.w.dim() != Q.d())
    fail(Errc::DimensionMismatch, "script_q_sup: bases shape");
  const int d1 = Q.d1();
  TrilinearForm Qb = Q.in_bases(bases.u.matrix(), bases.v.matrix(), bases.w.matrix());

  // Deterministic sphere design in coefficient space.
  std::vector<Vec> dirs;
  for (int i = 0; i < d1; ++i) {
    Vec e = Vec::Zero(d1);
    e(i) = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  std::mt19937_64 rng(0x5eed5u);
  std::normal_distribution<double> g;
  const int extra = (1 << std::min(d1, 20)) * d1 * d1;
  for (int r = 0; r < extra; ++r) {
    Vec x(d1);
    for (int i = 0; i < d1; ++i) x(i) = g(rng);
    if (x.norm() > 0) dirs.push_back(x / x.norm());
  }

  double total = 1.0;
  const int smax = std::min(Q.k(), Q.d());
  for (int s = 1; s <= smax; ++s) {
    auto vs = increasing_tuples(Q.k(), s);
    auto ws = increasing_tuples(Q.d(), s);
    double mult = factorial(s) * factorial(s);
    for (const auto& iv : vs)
      for (const auto& iw : ws) {
        auto value = [&](const Vec& c) {
          Mat m(s, s);
          for (int a = 0; a < s; ++a)
            for (int b = 0; b < s; ++b) {
              double x = 0.0;
              for (int i = 0; i < d1; ++i) x += c(i) * Qb(i, iv[a], iw[b]);
              m(a, b) = x;
            }
          return std::abs(det_small(m));
        };
        Vec best = dirs.front();
        double bv = -1.0;
        for (const Vec& c : dirs) {
          double v = value(c);
          if (v > bv) {
            bv = v;
            best = c;
          }
        }
        double step = 0.1;
        for (int it = 0; it < 20 && d1 > 1; ++it) {
          Vec grad(d1);
          const double h = 1e-6;
          for (int i = 0; i < d1; ++i) {
            Vec p = best, m = best;
            p(i) += h;
            m(i) -= h;
            grad(i) = (value(p / p.norm()) - value(m / m.norm())) / (2 * h);
          }
          grad -= best * best.dot(grad);
          if (grad.norm() == 0.0) break;
          Vec cand = best + step * grad / grad.norm();
          cand /= cand.norm();
          double cv = value(cand);
          if (cv > bv) {
            bv = cv;
            best = cand;
          } else {
            step *= 0.5;
          }
        }
        total += mult * bv * bv;
      }
  }
  return std::sqrt(total);
}

double normalized_ratio(const TrilinearForm& Q, const BasisTriple& bases) {
  const double s = scaling_order(Q.k(), Q.d());
  double logden = 0.0;
  if (Q.d1() > 0) logden += s / Q.d1() * std::log(bases.det_u);
  if (Q.k() > 0) logden += s / Q.k() * std::log(bases.det_v);
  if (Q.d() > 0) logden += s / Q.d() * std::log(bases.det_w);
  return std::exp(std::log(script_q(Q, bases)) - logden);
}

InversionSides inversion_identity(const TrilinearForm& Q, const BasisTriple& bases) {
  const int d1 = Q.d1(), k = Q.k(), d = Q.d();
  const Mat& U = bases.u.matrix();
  const Mat& V = bases.v.matrix();
  const Mat& W = bases.w.matrix();
  const int smax = std::min(k, d);

  // Theta(u_a, w_b) columns, indexed [a][b].
  std::vector<std::vector<Vec>> th(d1, std::vector<Vec>(d));
  for (int a = 0; a < d1; ++a)
    for (int b = 0; b < d; ++b) th[a][b] = Q.theta(U.col(a), W.col(b));

  InversionSides out;
  Mat m(k, k);
  for (int s = 0; s <= smax; ++s) {
    auto us = ordered_tuples(d1, s);
    auto ws = ordered_tuples(d, s);
    auto vsub = increasing_tuples(k, k - s);
    for (const auto& su : us)
      for (const auto& iv : vsub)
        for (const auto& sw : ws) {
          std::vector<int> perm(s);
          std::iota(perm.begin(), perm.end(), 0);
          double val = 0.0;
          do {
            for (int c = 0; c < k - s; ++c) m.col(c) = V.col(iv[c]);
            for (int c = 0; c < s; ++c) m.col(k - s + c) = th[su[perm[c]]][sw[c]];
            val += det_small(m);
          } while (std::next_permutation(perm.begin(), perm.end()));
          out.lhs += val * val;
        }
  }

  VectorList vstar = dual_basis(bases.v);
  TrilinearForm Qb = Q.in_bases(U, vstar.matrix(), W);
  double bracket = 1.0;
  for (int s = 1; s <= smax; ++s) {
    auto us = ordered_tuples(d1, s);
    auto ws = ordered_tuples(d, s);
    auto vsub = increasing_tuples(k, s);
    for (const auto& su : us)
      for (const auto& iv : vsub)
        for (const auto& sw : ws) {
          double c = coefficient_from_sequences(Qb, su, iv, sw, CoefMethod::Permutation);
          bracket += c * c;
        }
  }
  out.rhs = bases.det_v * bases.det_v * bracket;
  return out;
}

}  // namespace curvnd
