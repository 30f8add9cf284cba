#include "diagram.hpp"

#include "error.hpp"
#include "lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace curvnd {

ScalingPoint scaling_point(int d1, int k, int d, const mpq_class& s) {
  if (d1 < 1 || k < 1 || d < 1) fail(Errc::BadDimensions, "scaling_point: dimensions must be positive");
  if (sgn(s) < 0) fail(Errc::InvalidArgument, "scaling_point: s must be nonnegative");
  ScalingPoint p;
  p.d1 = d1;
  p.k = k;
  p.d = d;
  for (int i = 0; i < d1; ++i) p.exact.push_back(s / d1);
  for (int i = 0; i < k; ++i) p.exact.push_back(s / k);
  for (int i = 0; i < d; ++i) p.exact.push_back(s / d);
  for (auto& q : p.exact) q.canonicalize();
  p.approx.resize(static_cast<int>(p.exact.size()));
  for (std::size_t i = 0; i < p.exact.size(); ++i) p.approx(static_cast<int>(i)) = p.exact[i].get_d();
  return p;
}

ScalingPoint main_scaling_point(int d1, int k, int d) {
  mpq_class s(d * k, d + k);
  s.canonicalize();
  return scaling_point(d1, k, d, s);
}

std::vector<MultiindexTriple> DiagramSample::triples() const {
  std::vector<MultiindexTriple> out;
  for (const auto& p : points) out.push_back(p.triple);
  return out;
}

DiagramSample n0_points(const TrilinearForm& Q, const BasisTriple& bases, double eps_coef) {
  if (!bases.orthonormal(1e-10)) fail(Errc::NonOrthonormalBases, "n0_points: bases must be orthonormal");
  DiagramSample out;
  out.bases = bases;
  out.points.push_back({origin_triple(Q.d1(), Q.k(), Q.d()), 1.0, std::numeric_limits<double>::infinity()});
  if (Q.is_zero()) return out;
  DerivativeTable t = derivative_table(Q, bases);
  const double nq = Q.norm();
  for (std::size_t i = 0; i < t.triples.size(); ++i) {
    double c = t.values[i];
    if (std::abs(c) > eps_coef * nq) out.points.push_back({t.triples[i], c, std::abs(c) / nq});
  }
  return out;
}

namespace {

template <class T>
lp::Problem<T> membership_problem(const std::vector<MultiindexTriple>& pts, const std::vector<T>& q) {
  const std::size_t D = q.size(), N = pts.size();
  lp::Problem<T> p;
  p.resize(D + 1, N);
  for (std::size_t j = 0; j < N; ++j) {
    auto f = pts[j].flat();
    if (f.size() != D) fail(Errc::DimensionMismatch, "hull_membership: point dimension");
    for (std::size_t r = 0; r < D; ++r) p.at(r, j) = T(f[r]);
    p.at(D, j) = T(1);
  }
  for (std::size_t r = 0; r < D; ++r) p.b[r] = q[r];
  p.b[D] = T(1);
  return p;
}

// maximize x.q - t  s.t. x.p <= t, |x_j| <= 1, gauge sums zero on the v and w blocks.
template <class T>
lp::Problem<T> separation_problem(const std::vector<MultiindexTriple>& pts, const std::vector<T>& q, int d1, int k,
                                  int d) {
  const std::size_t D = q.size(), N = pts.size();
  // columns: x+ (D), x- (D), t, point slacks (N), box slacks (D)
  const std::size_t cols = 3 * D + 1 + N;
  const std::size_t rows = N + D + 2;
  lp::Problem<T> p;
  p.resize(rows, cols);
  const std::size_t ct = 2 * D;
  for (std::size_t i = 0; i < N; ++i) {
    auto f = pts[i].flat();
    for (std::size_t j = 0; j < D; ++j) {
      p.at(i, j) = T(f[j]);
      p.at(i, D + j) = T(-f[j]);
    }
    p.at(i, ct) = T(-1);
    p.at(i, ct + 1 + i) = T(1);
  }
  for (std::size_t j = 0; j < D; ++j) {
    p.at(N + j, j) = T(1);
    p.at(N + j, D + j) = T(1);
    p.at(N + j, ct + 1 + N + j) = T(1);
    p.b[N + j] = T(1);
  }
  for (int j = d1; j < d1 + k; ++j) {
    p.at(N + D, j) = T(1);
    p.at(N + D, D + j) = T(-1);
  }
  for (int j = d1 + k; j < d1 + k + d; ++j) {
    p.at(N + D + 1, j) = T(1);
    p.at(N + D + 1, D + j) = T(-1);
  }
  for (std::size_t j = 0; j < D; ++j) {
    p.c[j] = -q[j];
    p.c[D + j] = q[j];
  }
  p.c[ct] = T(1);
  return p;
}

struct Dims {
  int d1, k, d;
};

Dims dims_of(const std::vector<MultiindexTriple>& pts, std::size_t D) {
  if (pts.empty()) fail(Errc::InvalidArgument, "hull_membership: empty point set");
  Dims dm{static_cast<int>(pts[0].alpha.size()), static_cast<int>(pts[0].beta.size()),
          static_cast<int>(pts[0].gamma.size())};
  if (static_cast<std::size_t>(dm.d1 + dm.k + dm.d) != D)
    fail(Errc::DimensionMismatch, "hull_membership: query dimension");
  return dm;
}

double max_violation(const std::vector<MultiindexTriple>& pts, const std::vector<double>& w, const Vec& q) {
  Vec acc = Vec::Zero(q.size());
  double sw = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto f = pts[i].flat();
    for (std::size_t r = 0; r < f.size(); ++r) acc(static_cast<int>(r)) += w[i] * f[r];
    sw += w[i];
  }
  return std::max((acc - q).cwiseAbs().maxCoeff(), std::abs(sw - 1.0));
}

void separate(const std::vector<MultiindexTriple>& pts, const std::vector<mpq_class>* qexact, const Vec& q,
              const Dims& dm, HullResult& out) {
  std::vector<double> qd(q.data(), q.data() + q.size());
  auto sol = lp::solve(separation_problem<double>(pts, qd, dm.d1, dm.k, dm.d));
  const std::size_t D = q.size();
  if (sol.status == lp::Status::Optimal && -sol.objective > 1e-12) {
    out.separator.resize(static_cast<int>(D));
    for (std::size_t j = 0; j < D; ++j) out.separator(static_cast<int>(j)) = sol.x[j] - sol.x[D + j];
  } else if (qexact) {
    auto ex = lp::solve(separation_problem<mpq_class>(pts, *qexact, dm.d1, dm.k, dm.d));
    out.exact = true;
    out.separator.resize(static_cast<int>(D));
    for (std::size_t j = 0; j < D; ++j) out.separator(static_cast<int>(j)) = mpq_class(ex.x[j] - ex.x[D + j]).get_d();
  } else {
    out.separator = Vec::Zero(static_cast<int>(D));
  }
  // Clean tiny float noise on the lattice-friendly separator.
  for (int j = 0; j < out.separator.size(); ++j)
    if (std::abs(out.separator(j)) < 1e-13) out.separator(j) = 0.0;
  double best = 0.0;
  for (const auto& p : pts) {
    auto f = p.flat();
    double v = 0.0;
    for (std::size_t j = 0; j < D; ++j) v += out.separator(static_cast<int>(j)) * f[j];
    best = std::max(best, v);
  }
  out.separation = out.separator.dot(q) - best;
}

HullResult decide(const std::vector<MultiindexTriple>& pts, const std::vector<mpq_class>* qexact, const Vec& q,
                  const HullOptions& opts) {
  const std::size_t D = q.size();
  Dims dm = dims_of(pts, D);
  HullResult out;
  std::vector<double> qd(q.data(), q.data() + q.size());
  auto sol = lp::solve(membership_problem<double>(pts, qd));
  double infeas = sol.status == lp::Status::IterationLimit ? opts.tol : std::max(sol.infeasibility, 0.0);
  bool close = infeas >= opts.tol / 10 && infeas <= opts.tol * 10;
  if (sol.status == lp::Status::IterationLimit) close = true;
  bool inside = false;
  if (!close || !qexact) {
    inside = infeas <= opts.tol;
    if (inside) {
      out.weights = sol.x;
      for (double& w : out.weights) w = std::max(w, 0.0);
      out.residual = max_violation(pts, out.weights, q);
      if (out.residual > opts.tol && qexact) close = true;
    }
  }
  if ((close && qexact) || (inside && opts.want_exact_weights && qexact)) {
    auto ex = lp::solve(membership_problem<mpq_class>(pts, *qexact));
    out.exact = true;
    out.boundary = close;
    inside = sgn(ex.infeasibility) == 0;
    if (inside) {
      out.weights.clear();
      out.exact_weights.clear();
      for (auto& w : ex.x) {
        w.canonicalize();
        out.weights.push_back(w.get_d());
        out.exact_weights.push_back(w.get_str());
      }
      out.residual = max_violation(pts, out.weights, q);
    }
  }
  out.inside = inside;
  if (!inside) {
    out.weights.clear();
    separate(pts, qexact, q, dm, out);
  }
  return out;
}

}  // namespace

HullResult hull_membership(const std::vector<MultiindexTriple>& points, const ScalingPoint& query,
                           const HullOptions& opts) {
  return decide(points, &query.exact, query.approx, opts);
}

HullResult hull_membership(const std::vector<MultiindexTriple>& points, const std::vector<double>& query,
                           const HullOptions& opts) {
  Vec q(static_cast<int>(query.size()));
  std::vector<mpq_class> ex;
  for (std::size_t i = 0; i < query.size(); ++i) {
    q(static_cast<int>(i)) = query[i];
    ex.emplace_back(query[i]);
  }
  return decide(points, &ex, q, opts);
}

Witness witness_from_functional(const BasisTriple& bases, const Vec& x) {
  const int d1 = bases.u.size(), k = bases.v.size(), d = bases.w.size();
  if (x.size() != d1 + k + d) fail(Errc::DimensionMismatch, "witness_from_functional: functional length");
  Witness w;
  w.bases = bases;
  w.x = x;
  auto build = [](const Mat& B, const Vec& ev) -> Mat { return B * ev.asDiagonal() * B.transpose(); };
  w.D1 = build(bases.u.matrix(), x.segment(0, d1));
  w.D2 = build(bases.v.matrix(), x.segment(d1, k));
  w.D3 = build(bases.w.matrix(), x.segment(d1 + k, d));
  return w;
}

namespace {

struct FlowTerms {
  std::vector<double> logw;  // log multinomial weight + 2 log|c|
  std::vector<double> xp;    // x . p
  double xo = 0;             // x . o_s
};

FlowTerms flow_terms(const TrilinearForm& Q, const Witness& w) {
  const int d1 = Q.d1(), k = Q.k(), d = Q.d();
  ScalingPoint os = main_scaling_point(d1, k, d);
  FlowTerms ft;
  ft.xo = w.x.dot(os.approx);
  if (Q.is_zero()) return ft;
  DerivativeTable t = derivative_table(Q, w.bases);
  for (std::size_t i = 0; i < t.triples.size(); ++i) {
    double c = t.values[i];
    if (c == 0.0) continue;
    const auto& tr = t.triples[i];
    ft.logw.push_back(log_multinomial_weight(tr.alpha, tr.beta, tr.gamma) + 2.0 * std::log(std::abs(c)));
    auto f = tr.flat();
    double xp = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) xp += w.x(static_cast<int>(j)) * f[j];
    ft.xp.push_back(xp);
  }
  return ft;
}

double log_ratio_at(const FlowTerms& ft, double tau) {
  double mx = 0.0;
  for (std::size_t i = 0; i < ft.logw.size(); ++i) mx = std::max(mx, ft.logw[i] + 2.0 * tau * ft.xp[i]);
  double s = std::exp(-mx);
  for (std::size_t i = 0; i < ft.logw.size(); ++i) s += std::exp(ft.logw[i] + 2.0 * tau * ft.xp[i] - mx);
  return 0.5 * (mx + std::log(s)) - tau * ft.xo;
}

void check_traces(const Witness& w) {
  double scale = std::max(1.0, w.x.cwiseAbs().maxCoeff());
  if (!(w.D1.trace() > 1e-12 * scale)) fail(Errc::TraceViolation, "witness: trace(D1) must be positive");
  if (std::abs(w.D2.trace()) > 1e-9 * scale) fail(Errc::TraceViolation, "witness: trace(D2) must vanish");
  if (std::abs(w.D3.trace()) > 1e-9 * scale) fail(Errc::TraceViolation, "witness: trace(D3) must vanish");
}

}  // namespace

double witness_log_ratio(const TrilinearForm& Q, const Witness& w, double tau) {
  return log_ratio_at(flow_terms(Q, w), tau);
}

std::vector<double> default_tau_grid(double tau_max, int points) {
  std::vector<double> g;
  for (int i = 0; i < points; ++i) g.push_back(tau_max * i / (points - 1));
  return g;
}

DecayReport witness_check(const TrilinearForm& Q, const Witness& w, const std::vector<double>& tau_grid,
                          double slope_floor) {
  check_traces(w);
  if (!w.bases.orthonormal(1e-9)) fail(Errc::NonOrthonormalBases, "witness_check: eigenvector bases");
  if (tau_grid.size() < 2) fail(Errc::InvalidArgument, "witness_check: need at least two tau values");
  FlowTerms ft = flow_terms(Q, w);
  DecayReport r;
  r.taus = tau_grid;
  for (double tau : tau_grid) r.log_ratios.push_back(log_ratio_at(ft, tau));
  const double n = static_cast<double>(tau_grid.size());
  double mt = 0, ml = 0;
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    mt += tau_grid[i];
    ml += r.log_ratios[i];
  }
  mt /= n;
  ml /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    sxx += (tau_grid[i] - mt) * (tau_grid[i] - mt);
    sxy += (tau_grid[i] - mt) * (r.log_ratios[i] - ml);
  }
  r.slope = sxy / sxx;
  r.intercept = ml - r.slope * mt;
  double rss = 0;
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    double e = r.log_ratios[i] - r.intercept - r.slope * tau_grid[i];
    rss += e * e;
  }
  r.slope_stderr = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
  double top = 0.0;
  double floor_coef = 2.0 * std::log(1e-9 * std::max(Q.norm(), 1e-300));
  for (std::size_t i = 0; i < ft.xp.size(); ++i)
    if (ft.logw[i] > floor_coef) top = std::max(top, ft.xp[i]);
  r.asymptotic_rate = top - ft.xo;
  r.accepted = r.slope <= -slope_floor;
  return r;
}

const char* verdict_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Nondegenerate: return "Nondegenerate";
    case VerdictStatus::Degenerate: return "Degenerate";
    case VerdictStatus::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

}  // namespace curvnd
