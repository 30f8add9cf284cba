#include "diagram.hpp"

#include "error.hpp"
#include "parallel.hpp"
#include "rng.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/random/sobol.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace curvnd {

std::vector<BasisTriple> sobol_bases(int d1, int k, int d, int count, std::uint64_t seed) {
  const int D = d1 * d1 + k * k + d * d;
  boost::random::sobol eng(static_cast<std::size_t>(D));
  eng.discard(static_cast<boost::uintmax_t>(D));  // skip the all-zero point
  auto rng = stream_rng(seed, 0x50B01);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> shift(D);
  for (double& s : shift) s = unif(rng);
  const double scale = static_cast<double>(eng.max()) + 1.0;
  std::vector<BasisTriple> out;
  out.reserve(count);
  for (int c = 0; c < count; ++c) {
    std::vector<double> z(D);
    for (int j = 0; j < D; ++j) {
      double u = static_cast<double>(eng()) / scale + shift[j];
      u -= std::floor(u);
      u = std::clamp(u, 1e-15, 1.0 - 1e-15);
      z[j] = std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0);
    }
    int pos = 0;
    auto take = [&](int n) {
      Mat g(n, n);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = z[pos++];
      return VectorList(orthogonal_from_gaussian(g));
    };
    VectorList u = take(d1), v = take(k), w = take(d);
    out.emplace_back(u, v, w);
  }
  return out;
}

namespace {

Mat cayley(const Vec& theta, int n) {
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

int skew_dim(int n) { return n * (n - 1) / 2; }

struct Rotator {
  BasisTriple base;
  int pu, pv, pw;
  explicit Rotator(const BasisTriple& b)
      : base(b), pu(skew_dim(b.u.size())), pv(skew_dim(b.v.size())), pw(skew_dim(b.w.size())) {}
  int params() const { return pu + pv + pw; }
  BasisTriple at(const Vec& th) const {
    Mat U = base.u.matrix() * cayley(th.segment(0, pu), base.u.size());
    Mat V = base.v.matrix() * cayley(th.segment(pu, pv), base.v.size());
    Mat W = base.w.matrix() * cayley(th.segment(pu + pv, pw), base.w.size());
    return BasisTriple(VectorList(U), VectorList(V), VectorList(W));
  }
};

struct NMResult {
  Vec x;
  double f = 0;
  int evals = 0;
};

NMResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0, double step, int max_evals,
                     double target) {
  const int n = static_cast<int>(x0.size());
  std::vector<Vec> pts(n + 1, x0);
  std::vector<double> val(n + 1);
  int evals = 0;
  auto eval = [&](const Vec& x) {
    ++evals;
    return f(x);
  };
  val[0] = eval(pts[0]);
  for (int i = 0; i < n; ++i) {
    pts[i + 1](i) += step;
    val[i + 1] = eval(pts[i + 1]);
  }
  std::vector<int> order(n + 1);
  while (evals < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return val[a] < val[b]; });
    if (val[order[0]] <= target) break;
    if (std::abs(val[order[n]] - val[order[0]]) < 1e-15 && evals > 4 * (n + 1)) break;
    Vec centroid = Vec::Zero(n);
    for (int i = 0; i < n; ++i) centroid += pts[order[i]];
    centroid /= n;
    const int worst = order[n];
    Vec xr = centroid + (centroid - pts[worst]);
    double fr = eval(xr);
    if (fr < val[order[0]]) {
      Vec xe = centroid + 2.0 * (centroid - pts[worst]);
      double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
    } else if (fr < val[order[n - 1]]) {
      pts[worst] = xr;
      val[worst] = fr;
    } else {
      Vec xc = centroid + 0.5 * (pts[worst] - centroid);
      double fc = eval(xc);
      if (fc < val[worst]) {
        pts[worst] = xc;
        val[worst] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          int id = order[i];
          pts[id] = pts[order[0]] + 0.5 * (pts[id] - pts[order[0]]);
          val[id] = eval(pts[id]);
        }
      }
    }
  }
  int best = static_cast<int>(std::min_element(val.begin(), val.end()) - val.begin());
  return {pts[best], val[best], evals};
}

// Levenberg-Marquardt driving the listed coefficients to zero.
std::optional<BasisTriple> snap(const TrilinearForm& Q, const BasisTriple& start,
                                const std::vector<MultiindexTriple>& zero_set) {
  Rotator rot(start);
  const int P = rot.params();
  if (P == 0 || zero_set.empty()) return std::nullopt;
  const double nq = Q.norm();
  auto resid = [&](const Vec& th) {
    BasisTriple b = rot.at(th);
    TrilinearForm Qb = Q.in_bases(b.u.matrix(), b.v.matrix(), b.w.matrix());
    Vec r(static_cast<int>(zero_set.size()));
    for (std::size_t i = 0; i < zero_set.size(); ++i)
      r(static_cast<int>(i)) = coefficient_from_sequences(Qb, expand(zero_set[i].alpha), expand(zero_set[i].beta),
                                                          expand(zero_set[i].gamma)) /
                               nq;
    return r;
  };
  Vec th = Vec::Zero(P);
  Vec r = resid(th);
  double lambda = 1e-3;
  for (int it = 0; it < 200 && r.cwiseAbs().maxCoeff() > 1e-15; ++it) {
    Mat J(r.size(), P);
    const double h = 1e-7;
    for (int j = 0; j < P; ++j) {
      Vec tp = th, tm = th;
      tp(j) += h;
      tm(j) -= h;
      J.col(j) = (resid(tp) - resid(tm)) / (2 * h);
    }
    Mat A = J.transpose() * J;
    Vec g = J.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 12; ++tries) {
      Vec step = -(A + lambda * Mat::Identity(P, P)).ldlt().solve(g);
      Vec cand = th + step;
      Vec rc = resid(cand);
      if (rc.norm() < r.norm()) {
        th = cand;
        r = rc;
        lambda = std::max(lambda / 3.0, 1e-15);
        improved = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!improved) break;
  }
  if (r.cwiseAbs().maxCoeff() > 1e-13) return std::nullopt;
  return rot.at(th);
}

std::vector<MultiindexTriple> prefix_points(const BasisEval& ev, std::size_t count) {
  std::vector<MultiindexTriple> pts;
  for (std::size_t i = 0; i <= count && i < ev.sample.points.size(); ++i) pts.push_back(ev.sample.points[i].triple);
  return pts;
}

}  // namespace

BasisEval evaluate_bases(const TrilinearForm& Q, const BasisTriple& bases, const ScalingPoint& os, double eps_coef,
                         double hull_tol) {
  BasisEval ev;
  ev.sample = n0_points(Q, bases, eps_coef);
  auto& pts = ev.sample.points;
  std::stable_sort(pts.begin() + 1, pts.end(), [](const DiagramPoint& a, const DiagramPoint& b) {
    if (a.margin != b.margin) return a.margin > b.margin;
    return a.triple < b.triple;
  });
  const std::size_t N = pts.size() - 1;
  HullOptions ho;
  ho.tol = hull_tol;
  auto inside = [&](std::size_t P) { return hull_membership(prefix_points(ev, P), os, ho).inside; };
  if (!inside(N)) {
    ev.outside = true;
    ev.margin = 0.0;
    ev.prefix = N;
    return ev;
  }
  std::size_t lo = 0, hi = N;  // inside(hi) holds
  if (inside(0)) hi = 0;
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    if (inside(mid))
      hi = mid;
    else
      lo = mid;
  }
  ev.prefix = hi;
  ev.margin = hi == 0 ? 1.0 : std::min(1.0, pts[hi].margin);
  return ev;
}

Verdict verdict(const TrilinearForm& Q, const VerdictConfig& cfg) {
  const int d1 = Q.d1(), k = Q.k(), d = Q.d();
  if (d1 < 1 || k < 1 || d < 1) fail(Errc::BadDimensions, "verdict: dimensions must be positive");
  if (cfg.n_samples < 0 || cfg.restarts < 0 || cfg.optimizer_iters < 0)
    fail(Errc::InvalidArgument, "verdict: budgets must be nonnegative");
  const ScalingPoint os = main_scaling_point(d1, k, d);
  const auto taus = default_tau_grid(cfg.tau_max, 21);
  Verdict out;

  auto try_witness = [&](const BasisEval& ev) -> bool {
    HullOptions ho;
    ho.tol = cfg.hull_tol;
    HullResult hr = hull_membership(ev.sample.triples(), os, ho);
    if (hr.inside || hr.separation <= 0) return false;
    Witness w = witness_from_functional(ev.sample.bases, hr.separator);
    DecayReport rep = witness_check(Q, w, taus, cfg.slope_floor);
    if (!rep.accepted) return false;
    w.predicted_rate = rep.asymptotic_rate;
    out.status = VerdictStatus::Degenerate;
    out.witness = w;
    out.decay = rep;
    out.stats.min_margin = 0.0;
    out.margins = {0.0};
    return true;
  };

  std::vector<BasisTriple> cands;
  cands.push_back(BasisTriple::identity(d1, k, d));
  for (auto& b : sobol_bases(d1, k, d, cfg.n_samples, cfg.seed)) cands.push_back(std::move(b));
  std::vector<BasisEval> evals(cands.size());
  parallel_for(cands.size(), cfg.threads,
               [&](std::size_t i) { evals[i] = evaluate_bases(Q, cands[i], os, cfg.eps_coef, cfg.hull_tol); });
  out.stats.samples = static_cast<int>(cands.size());

  for (const auto& ev : evals)
    if (ev.outside && try_witness(ev)) return out;

  std::vector<std::size_t> order(evals.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return evals[a].margin < evals[b].margin; });

  // Local descent on the orthogonal group from the worst samples.
  const int runs = std::min<int>(cfg.restarts, static_cast<int>(order.size()));
  std::vector<BasisEval> polished(runs);
  std::vector<int> used(runs, 0);
  Rotator probe(cands[0]);
  if (probe.params() > 0) {
    parallel_for(static_cast<std::size_t>(runs), cfg.threads, [&](std::size_t r) {
      Rotator rot(cands[order[r]]);
      auto f = [&](const Vec& th) {
        return evaluate_bases(Q, rot.at(th), os, cfg.eps_coef, cfg.hull_tol).margin;
      };
      NMResult nm = nelder_mead(f, Vec::Zero(rot.params()), 0.3, cfg.optimizer_iters, 0.0);
      polished[r] = evaluate_bases(Q, rot.at(nm.x), os, cfg.eps_coef, cfg.hull_tol);
      used[r] = nm.evals;
    });
    out.stats.optimizer_runs = runs;
    for (int r = 0; r < runs; ++r) {
      out.stats.objective_evaluations += used[r];
      if (polished[r].outside && try_witness(polished[r])) return out;
    }
  }

  std::vector<const BasisEval*> pool;
  for (const auto& ev : evals) pool.push_back(&ev);
  for (const auto& ev : polished)
    if (!ev.sample.points.empty()) pool.push_back(&ev);
  std::stable_sort(pool.begin(), pool.end(), [](const BasisEval* a, const BasisEval* b) { return a->margin < b->margin; });
  const BasisEval& worst = *pool.front();
  out.stats.min_margin = worst.margin;
  for (std::size_t i = 0; i < pool.size() && i < 8; ++i) out.margins.push_back(pool[i]->margin);

  // Snap nearly vanishing coefficients to exact zeros and look for a witness there.
  for (std::size_t c = 0; c < pool.size() && c < static_cast<std::size_t>(std::max(1, cfg.restarts)); ++c) {
    const BasisEval& ev = *pool[c];
    if (ev.margin >= cfg.snap_threshold || ev.outside) break;
    std::vector<std::vector<MultiindexTriple>> zero_sets;
    std::vector<MultiindexTriple> z1, z2;
    for (std::size_t i = ev.prefix; i < ev.sample.points.size(); ++i) z1.push_back(ev.sample.points[i].triple);
    for (std::size_t i = 1; i < ev.sample.points.size(); ++i)
      if (ev.sample.points[i].margin < cfg.snap_threshold) z2.push_back(ev.sample.points[i].triple);
    zero_sets.push_back(z1);
    if (z2 != z1) zero_sets.push_back(z2);
    for (const auto& z : zero_sets) {
      ++out.stats.snap_attempts;
      auto snapped = snap(Q, ev.sample.bases, z);
      if (!snapped) continue;
      BasisEval sev = evaluate_bases(Q, *snapped, os, cfg.eps_coef, cfg.hull_tol);
      if (sev.outside && try_witness(sev)) return out;
    }
  }

  if (worst.margin > cfg.margin_floor) {
    out.status = VerdictStatus::Nondegenerate;
    HullOptions ho;
    ho.tol = cfg.hull_tol;
    ho.want_exact_weights = true;
    for (std::size_t i = 0; i < pool.size() && static_cast<int>(out.certificate.size()) < cfg.certificate_size; ++i) {
      const BasisEval& ev = *pool[i];
      auto pts = prefix_points(ev, ev.prefix);
      HullResult hr = hull_membership(pts, os, ho);
      if (!hr.inside) continue;
      Ensemble en;
      en.bases = ev.sample.bases;
      en.margin = ev.margin;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (hr.weights[j] == 0.0) continue;
        en.triples.push_back(pts[j]);
        en.weights.push_back(hr.weights[j]);
        en.exact_weights.push_back(j < hr.exact_weights.size() ? hr.exact_weights[j] : "");
        en.coefficients.push_back(ev.sample.points[j].coefficient);
      }
      en.residual = hr.residual;
      out.certificate.push_back(std::move(en));
    }
    out.note = "nondegenerate at the confidence of the search budget";
  } else {
    out.status = VerdictStatus::Inconclusive;
    out.stats.budget_exhausted = true;
    out.note = "minimum margin below floor and no verified witness within budget";
  }
  return out;
}

double min_log_ratio_over_scalings(const TrilinearForm& Q, const BasisTriple& bases) {
  const int d1 = Q.d1(), k = Q.k(), d = Q.d();
  const ScalingPoint os = main_scaling_point(d1, k, d);
  const int D = d1 + k + d;
  std::vector<double> la;
  std::vector<Vec> pv;
  if (!Q.is_zero()) {
    DerivativeTable t = derivative_table(Q, bases);
    for (std::size_t i = 0; i < t.triples.size(); ++i) {
      double c = t.values[i];
      if (c == 0.0) continue;
      const auto& tr = t.triples[i];
      la.push_back(log_multinomial_weight(tr.alpha, tr.beta, tr.gamma) + 2.0 * std::log(std::abs(c)));
      auto f = tr.flat();
      Vec p(D);
      for (int j = 0; j < D; ++j) p(j) = f[j];
      pv.push_back(p);
    }
  }
  const Vec& o = os.approx;
  auto value = [&](const Vec& y) {
    double m = 0.0;
    for (std::size_t i = 0; i < la.size(); ++i) m = std::max(m, la[i] + 2.0 * y.dot(pv[i]));
    double s = std::exp(-m);
    for (std::size_t i = 0; i < la.size(); ++i) s += std::exp(la[i] + 2.0 * y.dot(pv[i]) - m);
    return m + std::log(s) - 2.0 * y.dot(o);
  };
  Vec y = Vec::Zero(D);
  double fy = value(y);
  for (int it = 0; it < 200; ++it) {
    double m = 0.0;
    std::vector<double> z(la.size());
    for (std::size_t i = 0; i < la.size(); ++i) {
      z[i] = la[i] + 2.0 * y.dot(pv[i]);
      m = std::max(m, z[i]);
    }
    double s = std::exp(-m);
    for (double zi : z) s += std::exp(zi - m);
    Vec mu = Vec::Zero(D);
    Mat second = Mat::Zero(D, D);
    for (std::size_t i = 0; i < la.size(); ++i) {
      double w = std::exp(z[i] - m) / s;
      mu += w * pv[i];
      second += w * pv[i] * pv[i].transpose();
    }
    Vec g = 2.0 * (mu - o);
    if (g.norm() < 1e-12) break;
    Mat H = 4.0 * (second - mu * mu.transpose());
    H.diagonal().array() += 1e-10 + 1e-6 * g.norm();
    Vec step = -H.ldlt().solve(g);
    double t = 1.0;
    double fn = value(y + step);
    int bt = 0;
    while (!(fn <= fy + 1e-4 * t * g.dot(step)) && bt < 50) {
      t *= 0.5;
      fn = value(y + t * step);
      ++bt;
    }
    if (bt == 50) break;
    y += t * step;
    fy = fn;
    if (y.cwiseAbs().maxCoeff() > 200.0) break;
  }
  return 0.5 * fy;
}

double infimum_ratio(const TrilinearForm& Q, const InfimumOptions& opts) {
  const int d1 = Q.d1(), k = Q.k(), d = Q.d();
  std::vector<BasisTriple> cands;
  cands.push_back(BasisTriple::identity(d1, k, d));
  for (auto& b : sobol_bases(d1, k, d, opts.samples, opts.seed)) cands.push_back(std::move(b));
  std::vector<double> vals(cands.size());
  parallel_for(cands.size(), opts.threads,
               [&](std::size_t i) { vals[i] = min_log_ratio_over_scalings(Q, cands[i]); });
  std::vector<std::size_t> order(vals.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
  double best = vals[order[0]];
  const int runs = std::min<int>(opts.restarts, static_cast<int>(order.size()));
  Rotator probe(cands[0]);
  if (probe.params() > 0) {
    std::vector<double> got(runs);
    parallel_for(static_cast<std::size_t>(runs), opts.threads, [&](std::size_t r) {
      Rotator rot(cands[order[r]]);
      auto f = [&](const Vec& th) { return min_log_ratio_over_scalings(Q, rot.at(th)); };
      got[r] = nelder_mead(f, Vec::Zero(rot.params()), 0.2, opts.iters, -std::numeric_limits<double>::infinity()).f;
    });
    for (double g : got) best = std::min(best, g);
  }
  return std::exp(best);
}

StabilityReport stability_margin(const TrilinearForm& Q, double radius, const VerdictConfig& cfg, int perturbations) {
  if (!(radius >= 0.0)) fail(Errc::InvalidArgument, "stability_margin: radius must be nonnegative");
  Verdict v = verdict(Q, cfg);
  if (v.status != VerdictStatus::Nondegenerate) fail(Errc::NotNondegenerate, "stability_margin: Q is not nondegenerate");
  InfimumOptions io;
  io.seed = cfg.seed;
  io.threads = cfg.threads;
  StabilityReport rep;
  rep.radius = radius;
  rep.c0 = infimum_ratio(Q, io);
  rep.perturbations = perturbations;

  auto rng = stream_rng(cfg.seed, 0x57AB);
  std::vector<TrilinearForm> dirs;
  for (int i = 0; i < perturbations; ++i) {
    Mat g = gaussian_matrix(rng, static_cast<int>(Q.coeffs().size()), 1);
    std::vector<double> c(g.data(), g.data() + g.size());
    TrilinearForm G(Q.d1(), Q.k(), Q.d(), c);
    dirs.push_back(G * (1.0 / G.norm()));
  }
  if (!Q.is_zero()) dirs.push_back(Q * (-1.0 / Q.norm()));

  auto worst_at = [&](double r) {
    if (r >= Q.norm()) return 0.0;  // the ball contains the zero tensor
    double c = rep.c0;
    for (const auto& G : dirs) c = std::min(c, infimum_ratio(Q + G * r, io));
    return c;
  };
  rep.c = radius == 0.0 ? rep.c0 : worst_at(radius);

  const double floor = 1e-6;
  double lo = 0.0, hi = Q.norm();
  for (int it = 0; it < 10; ++it) {
    double mid = 0.5 * (lo + hi);
    if (worst_at(mid) > floor)
      lo = mid;
    else
      hi = mid;
  }
  rep.largest_stable_radius = lo;
  return rep;
}

}  // namespace curvnd
