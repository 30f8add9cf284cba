#include "harness.hpp"

#include "error.hpp"
#include "parallel.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

namespace curvnd {

namespace {

struct Rule {
  std::vector<double> x, w;
};

Rule gauss_legendre(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    r.x[i] = z;
    r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return r;
}

const Rule& rule16() {
  static const Rule r = gauss_legendre(16);
  return r;
}
const Rule& rule8() {
  static const Rule r = gauss_legendre(8);
  return r;
}

double bump(double z) { return std::abs(z) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - z * z)) : 0.0; }

}  // namespace

TestingProblem::TestingProblem(const PolynomialMap& phi, Cutoff eta, double p_dual) : phi_(phi), eta_(eta), pd_(p_dual) {
  if (!(p_dual > 1.0)) fail(Errc::InvalidArgument, "testing: p' must exceed 1");
  if (!(eta.radius > 0.0)) fail(Errc::InvalidArgument, "testing: cutoff radius must be positive");
  if (phi.d1() < 1) fail(Errc::BadDimensions, "testing: need d1 >= 1");
  dx_.resize(phi.k());
  for (int j = 0; j < phi.k(); ++j)
    for (int l = 0; l < phi.n(); ++l) dx_[j].push_back(phi[j].derivative(l));
}

double TestingProblem::eta(const Vec& x, const Vec& t, const Vec& y) const {
  const double r = eta_.radius;
  switch (eta_.kind) {
    case CutoffKind::Zero:
      return 0.0;
    case CutoffKind::Box:
      for (const Vec* v : {&x, &t, &y})
        for (int i = 0; i < v->size(); ++i)
          if (std::abs((*v)(i)) > r) return 0.0;
      return 1.0;
    case CutoffKind::Bump: {
      double e = 1.0;
      for (const Vec* v : {&x, &t, &y})
        for (int i = 0; i < v->size(); ++i) e *= bump((*v)(i) / r);
      return e;
    }
  }
  return 0.0;
}

double TestingProblem::integrand(const Vec& x, const Mat& omega, const Vec& t, bool& capped) const {
  const int n = phi_.n(), d1 = phi_.d1(), k = phi_.k();
  std::vector<double> p(n + d1);
  for (int i = 0; i < n; ++i) p[i] = x(i);
  for (int i = 0; i < d1; ++i) p[n + i] = t(i);
  Vec y(k);
  for (int j = 0; j < k; ++j) y(j) = phi_[j].eval(p);
  double e = eta(x, t, y);
  if (e == 0.0) return 0.0;
  Mat G(k, n);
  for (int j = 0; j < k; ++j)
    for (int l = 0; l < n; ++l) G(j, l) = dx_[j][l].eval(p);
  Mat A = G * omega;
  double nrm = std::sqrt(std::max(0.0, (A * A.transpose()).determinant()));
  double val = std::pow(std::abs(e), pd_) * std::pow(nrm, -(pd_ - 1.0));
  if (!(val <= kIntegrandCap)) {
    capped = true;
    return kIntegrandCap;
  }
  return val;
}

TestingValue TestingProblem::integral(const Vec& x, const Mat& omega, const TestingOptions& opts) const {
  const int n = phi_.n(), d1 = phi_.d1();
  if (x.size() != n || omega.rows() != n || omega.cols() != n)
    fail(Errc::DimensionMismatch, "testing_integral: point or basis dimension");
  if (std::abs(std::abs(omega.determinant()) - 1.0) > 1e-9)
    fail(Errc::NonUnitDeterminant, "testing_integral: |det omega| must be 1");
  TestingValue out;
  if (eta_.kind == CutoffKind::Zero) return out;
  const double r = eta_.radius;
  bool capped = false;

  if (d1 > 3) {
    auto rng = stream_rng(opts.seed, 0x7E57);
    std::uniform_real_distribution<double> u(-r, r);
    double s = 0.0, s2 = 0.0;
    Vec t(d1);
    for (int i = 0; i < opts.mc_samples; ++i) {
      for (int j = 0; j < d1; ++j) t(j) = u(rng);
      double v = integrand(x, omega, t, capped);
      s += v;
      s2 += v * v;
    }
    const double N = opts.mc_samples, vol = std::pow(2.0 * r, d1);
    out.value = vol * s / N;
    out.error = vol * std::sqrt(std::max(0.0, s2 / N - (s / N) * (s / N)) / N);
    out.divergent = capped;
    return out;
  }

  struct Region {
    Vec lo, hi;
    double v16 = 0, err = 0;
  };
  auto rule_eval = [&](const Rule& R, const Vec& lo, const Vec& hi) {
    const int m = static_cast<int>(R.x.size());
    std::vector<int> idx(d1, 0);
    Vec t(d1);
    double s = 0.0;
    while (true) {
      double w = 1.0;
      for (int j = 0; j < d1; ++j) {
        double h = 0.5 * (hi(j) - lo(j));
        t(j) = lo(j) + h * (R.x[idx[j]] + 1.0);
        w *= R.w[idx[j]] * h;
      }
      s += w * integrand(x, omega, t, capped);
      int j = 0;
      while (j < d1 && ++idx[j] == m) idx[j++] = 0;
      if (j == d1) break;
    }
    return s;
  };
  auto make = [&](Vec lo, Vec hi) {
    Region g{std::move(lo), std::move(hi)};
    g.v16 = rule_eval(rule16(), g.lo, g.hi);
    g.err = std::abs(g.v16 - rule_eval(rule8(), g.lo, g.hi));
    return g;
  };
  auto cmp = [](const Region& a, const Region& b) { return a.err < b.err; };
  std::priority_queue<Region, std::vector<Region>, decltype(cmp)> pq(cmp);
  pq.push(make(Vec::Constant(d1, -r), Vec::Constant(d1, r)));
  double total = pq.top().v16, err = pq.top().err;
  int regions = 1;
  while (err > opts.rel_tol * std::abs(total) && err > 1e-300 && regions < opts.max_regions) {
    Region g = pq.top();
    pq.pop();
    total -= g.v16;
    err -= g.err;
    for (int mask = 0; mask < (1 << d1); ++mask) {
      Vec lo = g.lo, hi = g.hi;
      for (int j = 0; j < d1; ++j) {
        double mid = 0.5 * (g.lo(j) + g.hi(j));
        if (mask & (1 << j))
          lo(j) = mid;
        else
          hi(j) = mid;
      }
      Region c = make(lo, hi);
      total += c.v16;
      err += c.err;
      pq.push(std::move(c));
    }
    regions += (1 << d1) - 1;
  }
  // Recompute the sums to shed the drift from incremental updates.
  total = 0.0;
  err = 0.0;
  while (!pq.empty()) {
    total += pq.top().v16;
    err += pq.top().err;
    pq.pop();
  }
  out.value = total;
  out.error = err;
  out.divergent = capped;
  return out;
}

TestingValue testing_integral(const PolynomialMap& phi, const Cutoff& eta, const Vec& x, const Mat& omega,
                              double p_dual, const TestingOptions& opts) {
  return TestingProblem(phi, eta, p_dual).integral(x, omega, opts);
}

namespace {

Mat cayley_n(const Vec& theta, int n) {
  Mat S = Mat::Zero(n, n);
  int p = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      S(i, j) = theta(p);
      S(j, i) = -theta(p);
      ++p;
    }
  Mat I = Mat::Identity(n, n);
  return (I - S).partialPivLu().solve(I + S);
}

// Orthonormal basis of the trace-zero hyperplane of R^n.
Mat traceless_basis(int n) {
  Mat H = Mat::Zero(n, n - 1);
  for (int j = 0; j < n - 1; ++j) {
    for (int i = 0; i <= j; ++i) H(i, j) = 1.0;
    H(j + 1, j) = -(j + 1.0);
    H.col(j).normalize();
  }
  return H;
}

Mat stretched(const Mat& O, const Vec& a, double tau) { return O * (tau * a).array().exp().matrix().asDiagonal(); }

struct Candidate {
  Vec x;
  Mat O;
  Vec a;
};

double nm_maximize(const std::function<double(const Vec&)>& f, Vec x0, double step, int iters, int& evals, Vec& best) {
  const int n = static_cast<int>(x0.size());
  std::vector<Vec> pts(n + 1, x0);
  std::vector<double> val(n + 1);
  val[0] = -f(pts[0]);
  for (int i = 0; i < n; ++i) {
    pts[i + 1](i) += step;
    val[i + 1] = -f(pts[i + 1]);
  }
  int used = n + 1;
  std::vector<int> ord(n + 1);
  while (used < iters) {
    for (int i = 0; i <= n; ++i) ord[i] = i;
    std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) { return val[a] < val[b]; });
    if (std::abs(val[ord[n]] - val[ord[0]]) <= 1e-10 * (1.0 + std::abs(val[ord[0]]))) break;
    Vec c = Vec::Zero(n);
    for (int i = 0; i < n; ++i) c += pts[ord[i]];
    c /= n;
    int w = ord[n];
    Vec xr = 2.0 * c - pts[w];
    double fr = -f(xr);
    ++used;
    if (fr < val[ord[0]]) {
      Vec xe = 3.0 * c - 2.0 * pts[w];
      double fe = -f(xe);
      ++used;
      if (fe < fr) {
        pts[w] = xe;
        val[w] = fe;
      } else {
        pts[w] = xr;
        val[w] = fr;
      }
    } else if (fr < val[ord[n - 1]]) {
      pts[w] = xr;
      val[w] = fr;
    } else {
      Vec xc = 0.5 * (c + pts[w]);
      double fc = -f(xc);
      ++used;
      if (fc < val[w]) {
        pts[w] = xc;
        val[w] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          pts[ord[i]] = 0.5 * (pts[ord[0]] + pts[ord[i]]);
          val[ord[i]] = -f(pts[ord[i]]);
          ++used;
        }
      }
    }
  }
  evals += used;
  int b = static_cast<int>(std::min_element(val.begin(), val.end()) - val.begin());
  best = pts[b];
  return -val[b];
}

}  // namespace

SupResult testing_sup_search(const TestingProblem& prob, const Vec& xstar, double tau, const SupOptions& opts) {
  const int n = prob.map().n();
  if (xstar.size() != n) fail(Errc::DimensionMismatch, "testing_sup_search: base point dimension");
  const Mat H = traceless_basis(n);
  auto rng = stream_rng(opts.seed, 0x5E4C);
  std::vector<Vec> xs{xstar};
  std::uniform_real_distribution<double> u(-0.5 * prob.cutoff().radius, 0.5 * prob.cutoff().radius);
  for (int i = 1; i < opts.x_samples; ++i) {
    Vec x(n);
    for (int j = 0; j < n; ++j) x(j) = u(rng);
    xs.push_back(x);
  }
  std::vector<std::pair<Mat, Vec>> bases;
  for (int i = 0; i < n; ++i)
    for (double sg : {1.0, -1.0}) {
      Vec a = -Vec::Ones(n);
      a(i) += n;
      bases.emplace_back(Mat::Identity(n, n), sg * a.normalized());
    }
  for (int i = 0; i < opts.basis_samples; ++i) {
    Mat O = random_orthogonal(rng, n);
    Vec a = H * gaussian_vector(rng, n - 1);
    bases.emplace_back(O, a.normalized());
  }
  std::vector<Candidate> cands;
  for (const auto& x : xs)
    for (const auto& [O, a] : bases) cands.push_back({x, O, a});

  std::vector<TestingValue> vals(cands.size());
  parallel_for(cands.size(), opts.threads, [&](std::size_t i) {
    vals[i] = prob.integral(cands[i].x, stretched(cands[i].O, cands[i].a, tau), opts.quad);
  });
  SupResult res;
  res.evaluations = static_cast<int>(cands.size());
  std::vector<std::size_t> order(cands.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a].value > vals[b].value; });
  for (const auto& v : vals) res.divergent = res.divergent || v.divergent;

  auto record = [&](const Candidate& c, const TestingValue& v) {
    if (res.x.size() == 0 || v.value > res.value) {
      res.value = v.value;
      res.error = v.error;
      res.x = c.x;
      res.omega = stretched(c.O, c.a, tau);
      res.stretch = c.a;
    }
  };
  record(cands[order[0]], vals[order[0]]);

  const int pr = n * (n - 1) / 2;
  const int runs = std::min<int>(opts.polish, static_cast<int>(order.size()));
  std::vector<std::pair<Candidate, TestingValue>> polished(runs);
  std::vector<int> evals(runs, 0);
  std::vector<bool> exhausted(runs, false);
  parallel_for(static_cast<std::size_t>(runs), opts.threads, [&](std::size_t r) {
    const Candidate& c0 = cands[order[r]];
    Vec b0 = H.transpose() * c0.a;
    auto unpack = [&](const Vec& p) {
      Candidate c = c0;
      c.O = c0.O * cayley_n(p.head(pr), n);
      Vec b = b0 + p.tail(n - 1);
      c.a = b.norm() > 0 ? Vec(H * b.normalized()) : c0.a;
      return c;
    };
    auto f = [&](const Vec& p) {
      Candidate c = unpack(p);
      return prob.integral(c.x, stretched(c.O, c.a, tau), opts.quad).value;
    };
    Vec best;
    int used = 0;
    nm_maximize(f, Vec::Zero(pr + n - 1), 0.2, opts.polish_iters, used, best);
    evals[r] = used;
    exhausted[r] = used >= opts.polish_iters;
    Candidate c = unpack(best);
    polished[r] = {c, prob.integral(c.x, stretched(c.O, c.a, tau), opts.quad)};
  });
  for (int r = 0; r < runs; ++r) {
    res.evaluations += evals[r];
    res.budget_exhausted = res.budget_exhausted || exhausted[r];
    res.divergent = res.divergent || polished[r].second.divergent;
    record(polished[r].first, polished[r].second);
  }
  return res;
}

TestingSweep testing_sweep(const TestingProblem& prob, const Vec& xstar, const std::vector<double>& taus,
                           const SupOptions& opts) {
  if (taus.size() < 2) fail(Errc::InvalidArgument, "testing_sweep: need at least two tau values");
  TestingSweep s;
  s.taus = taus;
  const int n = prob.map().n();
  TestingValue base = prob.integral(xstar, Mat::Identity(n, n), opts.quad);
  s.baseline = base.value;
  s.divergent = base.divergent;
  for (double tau : taus) {
    SupResult r = testing_sup_search(prob, xstar, tau, opts);
    s.sups.push_back(r.value);
    s.errors.push_back(r.error);
    s.divergent = s.divergent || r.divergent;
  }
  s.monotone = true;
  for (std::size_t i = 1; i < s.sups.size(); ++i)
    if (s.sups[i] < s.sups[i - 1] * (1.0 - 1e-9)) s.monotone = false;
  double mx = *std::max_element(s.sups.begin(), s.sups.end());
  s.max_ratio = s.baseline > 0 ? mx / s.baseline : 0.0;
  s.stable = s.baseline > 0 && mx < 2.0 * s.baseline;
  bool positive = std::all_of(s.sups.begin(), s.sups.end(), [](double v) { return v > 0.0; });
  if (positive) {
    std::vector<double> ly, le;
    for (std::size_t i = 0; i < s.sups.size(); ++i) {
      ly.push_back(std::log(s.sups[i]));
      le.push_back(s.errors[i] / s.sups[i]);
    }
    s.log_fit = fit_line(s.taus, ly, le);
    s.unbounded_trend = s.monotone && s.log_fit.slope > 0.0 && s.sups.back() > s.sups.front() * (1.0 + 1e-6);
  }
  return s;
}

}  // namespace curvnd
