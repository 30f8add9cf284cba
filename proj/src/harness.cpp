#include "harness.hpp"

#include "error.hpp"
#include "parallel.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace curvnd {

double unit_ball_volume(int k) { return std::pow(M_PI, 0.5 * k) / std::tgamma(0.5 * k + 1.0); }

namespace {

std::vector<std::vector<int>> subsets(int m, int r) {
  std::vector<std::vector<int>> out;
  if (r > m || r < 0) return out;
  std::vector<int> c(r);
  std::iota(c.begin(), c.end(), 0);
  while (true) {
    out.push_back(c);
    int i = r - 1;
    while (i >= 0 && c[i] == m - r + i) --i;
    if (i < 0) break;
    ++c[i];
    for (int j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

Polynomial<double> poly_det(const std::vector<std::vector<Polynomial<double>>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  Polynomial<double> acc(m[0][0].nvars());
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    std::vector<std::vector<Polynomial<double>>> sub;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Polynomial<double>> row;
      for (std::size_t cc = 0; cc < n; ++cc)
        if (cc != c) row.push_back(m[r][cc]);
      sub.push_back(std::move(row));
    }
    Polynomial<double> term = m[0][c] * poly_det(sub);
    acc = c % 2 == 1 ? acc - term : acc + term;
  }
  return acc;
}

}  // namespace

double ellipsoid_image_volume(const Mat& L, const VectorList& omega) {
  if (L.cols() != omega.dim()) fail(Errc::DimensionMismatch, "ellipsoid_image_volume: L and omega disagree");
  const int k = static_cast<int>(L.rows());
  Mat A = L * omega.matrix();
  double s = 0.0;
  for (const auto& I : subsets(static_cast<int>(A.cols()), k)) {
    Mat S(k, k);
    for (int j = 0; j < k; ++j) S.col(j) = A.col(I[j]);
    double det = S.determinant();
    s += det * det;
  }
  return unit_ball_volume(k) * std::sqrt(s);
}

double ellipsoid_image_volume_gram(const Mat& L, const VectorList& omega) {
  if (L.cols() != omega.dim()) fail(Errc::DimensionMismatch, "ellipsoid_image_volume: L and omega disagree");
  Mat A = L * omega.matrix();
  return unit_ball_volume(static_cast<int>(L.rows())) * std::sqrt(std::max(0.0, (A * A.transpose()).determinant()));
}

SublevelFilter sublevel_filter(const Polynomial<double>& P, const std::vector<Vec>& samples, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) fail(Errc::InvalidArgument, "sublevel_filter: eps must lie in (0, 1)");
  SublevelFilter f;
  f.retained.assign(samples.size(), true);
  if (P.is_zero() || samples.empty()) return f;
  std::vector<double> vals(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) vals[i] = std::abs(P.eval(samples[i].data()));
  f.sup = *std::max_element(vals.begin(), vals.end());
  if (!(f.sup > 0.0)) return f;
  std::vector<double> sorted = vals;
  std::size_t idx = static_cast<std::size_t>(std::floor(eps * static_cast<double>(sorted.size())));
  std::nth_element(sorted.begin(), sorted.begin() + idx, sorted.end());
  f.threshold = sorted[idx];
  f.c = f.threshold / f.sup;
  std::size_t kept = 0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    f.retained[i] = vals[i] >= f.threshold;
    kept += f.retained[i];
  }
  f.retained_fraction = static_cast<double>(kept) / static_cast<double>(vals.size());
  return f;
}

ScalingFlow flow_from_witness(const Witness& w) {
  const int d1 = w.bases.u.size(), k = w.bases.v.size(), d = w.bases.w.size();
  if (w.x.size() != d1 + k + d) fail(Errc::DimensionMismatch, "flow_from_witness: eigenvalue count");
  ScalingFlow f;
  f.bases = w.bases;
  f.xu = w.x.segment(0, d1);
  f.xv = w.x.segment(d1, k);
  f.xw = w.x.segment(d1 + k, d);
  f.traceless = true;
  if (!(f.xu.sum() > 0.0) || std::abs(f.xv.sum()) > 1e-9 || std::abs(f.xw.sum()) > 1e-9)
    fail(Errc::TraceViolation, "flow_from_witness: trace conditions fail");
  return f;
}

ScalingFlow isotropic_flow(int d1, int k, int d) {
  ScalingFlow f;
  f.bases = BasisTriple::identity(d1, k, d);
  f.xu = Vec::Ones(d1);
  f.xv = -Vec::Ones(k);
  f.xw = Vec::Zero(d);
  f.traceless = false;
  return f;
}

Mat KnappFamily::L(const Vec& t) const {
  Mat out(k, n());
  out << theta.slice(t), Mat::Identity(k, k);
  return out;
}

bool KnappFamily::retained(const Vec& t) const {
  for (std::size_t j = 0; j < filters.size(); ++j)
    if (std::abs(filters[j].eval(t.data())) < thresholds[j]) return false;
  return true;
}

KnappFamily knapp_family(const TrilinearForm& theta, const ScalingFlow& flow, double tau, const KnappOptions& opts) {
  const int d1 = theta.d1(), k = theta.k(), d = theta.d();
  if (flow.bases.u.size() != d1 || flow.bases.v.size() != k || flow.bases.w.size() != d)
    fail(Errc::DimensionMismatch, "knapp_family: flow and tensor dimensions differ");
  if (!flow.bases.orthonormal()) fail(Errc::NonOrthonormalBases, "knapp_family: flow bases must be orthonormal");
  KnappFamily fam;
  fam.tau = tau;
  fam.d1 = d1;
  fam.k = k;
  fam.d = d;
  fam.theta = theta;
  const int n = d + k;
  fam.E = flow.bases.u.matrix() * (tau * flow.xu).array().exp().matrix().asDiagonal();
  Mat wv = flow.bases.w.matrix() * (tau * flow.xw).array().exp().matrix().asDiagonal();
  Mat vv = flow.bases.v.matrix() * (-tau * flow.xv).array().exp().matrix().asDiagonal();
  fam.omega = Mat::Zero(n, n);
  fam.omega.block(0, 0, d, d) = wv;
  fam.omega.block(d, d, k, k) = vv;
  fam.det_u = std::exp(tau * flow.xu.sum());
  fam.det_v = std::exp(-tau * flow.xv.sum());
  fam.det_w = std::exp(tau * flow.xw.sum());
  if (flow.traceless) {
    if (!(flow.xu.sum() > 0.0) || std::abs(std::log(fam.det_v)) > 1e-9 * (1 + tau) ||
        std::abs(std::log(fam.det_w)) > 1e-9 * (1 + tau))
      fail(Errc::TraceViolation, "knapp_family: trace conditions fail");
  }
  fam.volume_E = unit_ball_volume(d1) * fam.det_u;
  fam.volume_F = unit_ball_volume(n) * std::abs(fam.omega.determinant());

  // det(v_I, Theta(t, w_J)) for |I| = k - s, |J| = s, s >= 1.
  std::vector<Polynomial<double>> theta_cols(static_cast<std::size_t>(d) * k, Polynomial<double>(d1));
  for (int j = 0; j < d; ++j)
    for (int a = 0; a < k; ++a) {
      Polynomial<double> p(d1);
      for (int i = 0; i < d1; ++i) {
        double c = 0.0;
        for (int b = 0; b < d; ++b) c += theta(i, a, b) * wv(b, j);
        std::vector<int> e(d1, 0);
        e[i] = 1;
        p.add_term(e, c);
      }
      theta_cols[static_cast<std::size_t>(j) * k + a] = p;
    }
  auto rng = stream_rng(opts.seed, 0x4B4E);
  std::vector<Vec> samples(opts.filter_samples);
  for (auto& s : samples) s = fam.E * unit_ball_point(rng, d1);
  const double rE = fam.E.norm();
  std::vector<Polynomial<double>> polys;
  std::vector<double> bounds;
  for (int s = 1; s <= std::min(k, d); ++s)
    for (const auto& I : subsets(k, k - s))
      for (const auto& J : subsets(d, s)) {
        std::vector<std::vector<Polynomial<double>>> M(k, std::vector<Polynomial<double>>(k, Polynomial<double>(d1)));
        double bound = 1.0;
        int col = 0;
        for (int i : I) {
          for (int a = 0; a < k; ++a) M[a][col] = Polynomial<double>::constant(d1, vv(a, i));
          bound *= vv.col(i).norm();
          ++col;
        }
        for (int j : J) {
          for (int a = 0; a < k; ++a) M[a][col] = theta_cols[static_cast<std::size_t>(j) * k + a];
          bound *= theta.norm() * rE * wv.col(j).norm();
          ++col;
        }
        polys.push_back(poly_det(M));
        bounds.push_back(bound);
      }
  std::vector<std::size_t> live;
  std::vector<SublevelFilter> tmp;
  for (std::size_t j = 0; j < polys.size(); ++j) {
    if (polys[j].is_zero()) continue;
    double sup = 0.0;
    for (const auto& s : samples) sup = std::max(sup, std::abs(polys[j].eval(s.data())));
    if (sup <= 1e-12 * bounds[j]) continue;
    live.push_back(j);
  }
  const double eps = live.empty() ? 0.5 : 0.5 / static_cast<double>(live.size());
  std::vector<bool> all(samples.size(), true);
  for (std::size_t j : live) {
    SublevelFilter f = sublevel_filter(polys[j], samples, eps);
    fam.filters.push_back(polys[j]);
    fam.thresholds.push_back(f.threshold);
    for (std::size_t i = 0; i < samples.size(); ++i) all[i] = all[i] && f.retained[i];
  }
  fam.retained_fraction =
      static_cast<double>(std::count(all.begin(), all.end(), true)) / static_cast<double>(samples.size());
  return fam;
}

namespace {

struct Moments {
  double s1 = 0, s2 = 0, s11 = 0, s22 = 0, s12 = 0;
  std::size_t n = 0;
  void add(double a, double b) {
    s1 += a;
    s2 += b;
    s11 += a * a;
    s22 += b * b;
    s12 += a * b;
    ++n;
  }
  void merge(const Moments& o) {
    s1 += o.s1;
    s2 += o.s2;
    s11 += o.s11;
    s22 += o.s22;
    s12 += o.s12;
    n += o.n;
  }
};

// (indicator that L_t x lies in L_t F and t is retained, retained slice volume)
std::pair<double, double> incidence_terms(const KnappFamily& fam, const Vec& x, const Vec& t, double ball_k) {
  if (!fam.retained(t)) return {0.0, 0.0};
  Mat Lt = fam.L(t);
  Mat A = Lt * fam.omega;
  Mat G = A * A.transpose();
  Eigen::LDLT<Mat> ldlt(G);
  Vec y = Lt * x;
  double q = y.dot(ldlt.solve(y));
  double vol = ball_k * std::sqrt(std::max(0.0, G.determinant()));
  return {q <= 1.0 + 1e-12 ? 1.0 : 0.0, vol};
}

RatioEstimate finish(const KnappFamily& fam, double m1, double m2, double lv1, double lv2, double lc12, std::size_t N) {
  const int n = fam.n();
  ExponentSet ex = best_exponents(n, fam.k, fam.d1);
  const double p = ex.p.get_d(), qd = ex.q_dual.get_d();
  RatioEstimate r;
  r.samples = N;
  if (!(m1 > 0.0) || !(m2 > 0.0)) fail(Errc::InsufficientSamples, "incidence_ratio: no retained incidences sampled");
  r.numerator = fam.volume_F * fam.volume_E * m1;
  r.G_volume = fam.volume_E * m2;
  r.log_value = std::log(r.numerator) - std::log(fam.volume_F) / qd - std::log(r.G_volume) / p;
  r.value = std::exp(r.log_value);
  double var = lv1 / (m1 * m1) + lv2 / (m2 * m2 * p * p) - 2.0 * lc12 / (m1 * m2 * p);
  r.log_stderr = std::sqrt(std::max(0.0, var));
  r.stderr_ = r.value * r.log_stderr;
  return r;
}

std::vector<Vec> ball_grid(int dim, int r) {
  std::vector<Vec> pts;
  std::vector<int> idx(dim, 0);
  const double h = 2.0 / r;
  while (true) {
    Vec p(dim);
    for (int i = 0; i < dim; ++i) p(i) = -1.0 + h * (idx[i] + 0.5);
    if (p.squaredNorm() <= 1.0) pts.push_back(p);
    int i = 0;
    while (i < dim && ++idx[i] == r) idx[i++] = 0;
    if (i == dim) break;
  }
  return pts;
}

std::pair<double, double> grid_means(const KnappFamily& fam, int r, int threads) {
  auto xs = ball_grid(fam.n(), r);
  auto ts = ball_grid(fam.d1, r);
  const double ball_k = unit_ball_volume(fam.k);
  std::vector<double> a(ts.size()), b(ts.size());
  parallel_for(ts.size(), threads, [&](std::size_t i) {
    Vec t = fam.E * ts[i];
    double hits = 0.0, vol = 0.0;
    for (const auto& z : xs) {
      auto [h, v] = incidence_terms(fam, fam.omega * z, t, ball_k);
      if (v == 0.0) break;  // t not retained
      hits += h;
      vol = v;
    }
    a[i] = hits / static_cast<double>(xs.size());
    b[i] = vol;
  });
  double m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    m1 += a[i];
    m2 += b[i];
  }
  return {m1 / ts.size(), m2 / ts.size()};
}

}  // namespace

RatioEstimate incidence_ratio(const KnappFamily& fam, const RatioOptions& opts) {
  if (opts.samples < 16) fail(Errc::InvalidArgument, "incidence_ratio: too few samples");
  const double ball_k = unit_ball_volume(fam.k);
  RatioEstimate r;
  if (opts.method == RatioMethod::MonteCarlo) {
    const std::size_t chunk = 4096;
    const std::size_t chunks = (opts.samples + chunk - 1) / chunk;
    std::vector<Moments> mom(chunks);
    parallel_for(chunks, opts.threads, [&](std::size_t c) {
      auto rng = stream_rng(opts.seed, c);
      const std::size_t lo = c * chunk, hi = std::min(opts.samples, lo + chunk);
      for (std::size_t i = lo; i < hi; ++i) {
        Vec x = fam.omega * unit_ball_point(rng, fam.n());
        Vec t = fam.E * unit_ball_point(rng, fam.d1);
        auto [h, v] = incidence_terms(fam, x, t, ball_k);
        mom[c].add(h, v);
      }
    });
    Moments tot;
    for (const auto& m : mom) tot.merge(m);
    const double N = static_cast<double>(tot.n);
    const double m1 = tot.s1 / N, m2 = tot.s2 / N;
    const double v1 = tot.s11 / N - m1 * m1, v2 = tot.s22 / N - m2 * m2, c12 = tot.s12 / N - m1 * m2;
    r = finish(fam, m1, m2, v1 / N, v2 / N, c12 / N, tot.n);
  } else {
    int res = std::max(4, static_cast<int>(std::floor(std::pow(static_cast<double>(opts.samples),
                                                                1.0 / (fam.n() + fam.d1)))));
    auto [m1, m2] = grid_means(fam, res, opts.threads);
    auto [h1, h2] = grid_means(fam, std::max(2, res / 2), opts.threads);
    double e1 = std::abs(m1 - h1), e2 = std::abs(m2 - h2);
    r = finish(fam, m1, m2, e1 * e1, e2 * e2, 0.0, opts.samples);
  }
  if (r.log_stderr > opts.max_relative_se)
    fail(Errc::InsufficientSamples, "incidence_ratio: relative standard error above limit");
  return r;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& yerr) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) fail(Errc::InvalidArgument, "fit_line: need at least two points");
  double xb = 0, yb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    xb += x[i];
    yb += y[i];
  }
  xb /= n;
  yb /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xb) * (x[i] - xb);
    sxy += (x[i] - xb) * (y[i] - yb);
  }
  if (!(sxx > 0.0)) fail(Errc::InvalidArgument, "fit_line: x values coincide");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = yb - f.slope * xb;
  double rss = 0, meas = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double res = y[i] - f.intercept - f.slope * x[i];
    rss += res * res;
    if (i < yerr.size()) meas += (x[i] - xb) * (x[i] - xb) * yerr[i] * yerr[i];
  }
  double var = (n > 2 ? rss / (n - 2) / sxx : 0.0) + meas / (sxx * sxx);
  f.slope_stderr = std::sqrt(var);
  return f;
}

RatioSeries ratio_series(const TrilinearForm& theta, const ScalingFlow& flow, const std::vector<double>& taus,
                         const RatioOptions& ropts, const KnappOptions& kopts) {
  if (taus.size() < 5) fail(Errc::InvalidArgument, "ratio_series: need at least five tau values");
  RatioSeries s;
  s.flow = flow.traceless ? "witness" : "isotropic";
  for (double tau : taus) {
    KnappFamily fam = knapp_family(theta, flow, tau, kopts);
    RatioEstimate e = incidence_ratio(fam, ropts);
    s.taus.push_back(tau);
    s.ratios.push_back(e.value);
    s.stderrs.push_back(e.stderr_);
    s.log_ratios.push_back(e.log_value);
    s.log_stderrs.push_back(e.log_stderr);
  }
  s.fit = fit_line(s.taus, s.log_ratios, s.log_stderrs);
  s.ci_width = 1.96 * s.fit.slope_stderr;
  return s;
}

}  // namespace curvnd
