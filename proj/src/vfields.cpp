#include "vfields.hpp"

#include "error.hpp"
#include "rng.hpp"

#include <cmath>

namespace curvnd {

namespace {

std::vector<std::vector<int>> combinations(int m, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> c(d);
  for (int i = 0; i < d; ++i) c[i] = i;
  if (d > m) return out;
  while (true) {
    out.push_back(c);
    int i = d - 1;
    while (i >= 0 && c[i] == m - d + i) --i;
    if (i < 0) break;
    ++c[i];
    for (int j = i + 1; j < d; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

// Rows of gradient values at x; throws where a denominator vanishes.
Mat gradient_values(const GradientTable& g, const Point& x) {
  const int m = static_cast<int>(g.size());
  const int d = m == 0 ? 0 : static_cast<int>(g[0].size());
  Mat G(m, d);
  for (int j = 0; j < m; ++j)
    for (int l = 0; l < d; ++l) G(j, l) = g[j][l].eval(x);
  return G;
}

double minor_of(const Mat& G, const std::vector<int>& rows) {
  const int d = static_cast<int>(rows.size());
  Mat S(d, d);
  for (int r = 0; r < d; ++r) S.row(r) = G.row(rows[r]);
  return S.determinant();
}

std::vector<std::vector<RationalFunction>> remove_rc(const std::vector<std::vector<RationalFunction>>& m, int row,
                                                     int col) {
  std::vector<std::vector<RationalFunction>> out;
  for (int r = 0; r < static_cast<int>(m.size()); ++r) {
    if (r == row) continue;
    std::vector<RationalFunction> rr;
    for (int c = 0; c < static_cast<int>(m[r].size()); ++c)
      if (c != col) rr.push_back(m[r][c]);
    out.push_back(std::move(rr));
  }
  return out;
}

bool in_all_guards(const std::vector<VFGeneration>& gens, std::size_t upto, const Point& x) {
  for (std::size_t g = 0; g < upto; ++g)
    if (!gens[g].in_guard(x)) return false;
  return true;
}

}  // namespace

GradientTable gradients(const std::vector<RationalFunction>& f) {
  GradientTable g;
  for (const auto& c : f) {
    std::vector<RationalFunction> row;
    for (int l = 0; l < c.nvars(); ++l) row.push_back(c.derivative(l));
    g.push_back(std::move(row));
  }
  return g;
}

double max_abs_minor(const GradientTable& g, const Point& x) {
  Mat G = gradient_values(g, x);
  double best = 0.0;
  for (const auto& c : combinations(static_cast<int>(G.rows()), static_cast<int>(G.cols())))
    best = std::max(best, std::abs(minor_of(G, c)));
  return best;
}

double minor_value(const GradientTable& g, const std::vector<int>& minor, const Point& x) {
  return minor_of(gradient_values(g, x), minor);
}

MinorChoice select_minor(const std::vector<RationalFunction>& f, const std::vector<Point>& probes) {
  if (f.empty()) fail(Errc::InvalidArgument, "select_minor: no components");
  const int d = f[0].nvars();
  const int m = static_cast<int>(f.size());
  if (m < d) fail(Errc::RankDeficient, "select_minor: fewer components than variables");
  if (probes.empty()) fail(Errc::EmptyGuard, "select_minor: no probes");
  GradientTable g = gradients(f);
  auto combos = combinations(m, d);
  std::vector<double> sum(combos.size(), 0.0);
  std::size_t used = 0;
  for (const auto& x : probes) {
    Mat G;
    try {
      G = gradient_values(g, x);
    } catch (const Error&) {
      continue;
    }
    ++used;
    for (std::size_t c = 0; c < combos.size(); ++c) sum[c] += std::abs(minor_of(G, combos[c]));
  }
  if (used == 0) fail(Errc::EmptyGuard, "select_minor: every probe hits a pole");
  std::size_t best = 0;
  for (std::size_t c = 1; c < combos.size(); ++c)
    if (sum[c] > sum[best] * (1.0 + 1e-12)) best = c;
  if (!(sum[best] > 0.0)) fail(Errc::RankDeficient, "select_minor: Jacobian rank deficient at all probes");
  return {combos[best], sum[best] / static_cast<double>(used)};
}

RationalFunction VFGeneration::apply(int i, const RationalFunction& phi) const {
  RationalFunction acc = RationalFunction::constant(phi.nvars(), 0);
  for (int l = 0; l < d; ++l) {
    if (coeff[i][l].is_zero()) continue;
    RationalFunction dphi = phi.derivative(l);
    if (dphi.is_zero()) continue;
    acc = acc + coeff[i][l] * dphi;
  }
  return acc;
}

bool VFGeneration::in_guard(const Point& x) const {
  try {
    Mat G = gradient_values(input_grads, x);
    double best = 0.0;
    for (const auto& c : combinations(static_cast<int>(G.rows()), d)) best = std::max(best, std::abs(minor_of(G, c)));
    return best < 2.0 * std::abs(minor_of(G, minor));
  } catch (const Error&) {
    return false;
  }
}

VFGeneration gen1_fields(const std::vector<RationalFunction>& f, const std::vector<int>& minor, int N) {
  if (f.empty()) fail(Errc::InvalidArgument, "gen1_fields: no components");
  VFGeneration g;
  g.N = N;
  g.d = f[0].nvars();
  if (static_cast<int>(minor.size()) != g.d) fail(Errc::DimensionMismatch, "gen1_fields: minor size must equal d");
  for (int j : minor)
    if (j < 0 || j >= static_cast<int>(f.size())) fail(Errc::InvalidArgument, "gen1_fields: minor index out of range");
  g.inputs = f;
  g.input_grads = gradients(f);
  g.minor = minor;
  std::vector<std::vector<RationalFunction>> rows;
  for (int j : minor) rows.push_back(g.input_grads[j]);
  g.jac = rational_det(rows);
  if (g.jac.is_zero()) fail(Errc::RankDeficient, "gen1_fields: chosen minor vanishes identically");
  RationalFunction two_jac = g.jac * mpq_class(2);
  g.coeff.assign(g.d, {});
  for (int i = 0; i < g.d; ++i) {
    for (int l = 0; l < g.d; ++l) {
      RationalFunction m = g.d == 1 ? RationalFunction::constant(g.d, 1) : rational_det(remove_rc(rows, i, l));
      if ((i + l) % 2 == 1) m = -m;
      g.coeff[i].push_back(m.is_zero() ? m : m / two_jac);
    }
  }
  g.outputs = f;
  for (int i = 0; i < g.d; ++i)
    for (const auto& phi : f) g.outputs.push_back(g.apply(i, phi));
  return g;
}

VFGeneration iterate_generation(const std::vector<VFGeneration>& state, const std::vector<Point>& probes) {
  if (state.empty()) fail(Errc::InvalidArgument, "iterate_generation: empty state");
  std::vector<Point> inside;
  for (const auto& x : probes)
    if (in_all_guards(state, state.size(), x)) inside.push_back(x);
  if (inside.empty()) fail(Errc::EmptyGuard, "iterate_generation: guards have empty intersection over probes");
  const auto& prev = state.back();
  MinorChoice mc = select_minor(prev.outputs, inside);
  return gen1_fields(prev.outputs, mc.minor, prev.N + 1);
}

VFPipeline build_generations(const std::vector<RationalFunction>& f, int N, const std::vector<Point>& probes) {
  if (N < 1) fail(Errc::InvalidArgument, "build_generations: N must be positive");
  VFPipeline p;
  p.f = f;
  MinorChoice mc = select_minor(f, probes);
  p.generations.push_back(gen1_fields(f, mc.minor, 1));
  while (static_cast<int>(p.generations.size()) < N) p.generations.push_back(iterate_generation(p.generations, probes));
  return p;
}

VFReport verify_identities(const VFPipeline& p, const std::vector<Point>& probes, double threshold) {
  VFReport rep;
  rep.pass = true;
  const std::size_t m = p.f.size();
  for (std::size_t gi = 0; gi < p.generations.size(); ++gi) {
    const VFGeneration& g = p.generations[gi];
    const int d = g.d;
    VFGenerationReport r;
    r.N = g.N;
    r.minor = g.minor;
    r.components = g.outputs.size();
    r.expected_components = m;
    for (int i = 0; i < g.N; ++i) r.expected_components *= static_cast<std::size_t>(d + 1);

    std::vector<std::vector<RationalFunction>> kd(d);
    r.kronecker_exact = true;
    for (int i = 0; i < d; ++i)
      for (int ip = 0; ip < d; ++ip) {
        kd[i].push_back(g.apply(i, g.inputs[g.minor[ip]]));
        if (!kd[i][ip].equals_constant(mpq_class(i == ip ? 1 : 0, 2))) r.kronecker_exact = false;
      }
    RationalFunction vol = rational_det(g.coeff) * g.jac;
    mpq_class target(1, 1u << d);
    r.size1_exact = vol.equals_constant(target) || vol.equals_constant(-target);

    // Fields of earlier generations are expressed through the current ones
    // by c = 2 X^(N) applied to their selected inputs.
    std::vector<RationalFunction> coeffs;
    for (std::size_t gp = 0; gp < gi; ++gp)
      for (int i = 0; i < d; ++i)
        for (int ip = 0; ip < d; ++ip)
          coeffs.push_back(g.apply(i, p.generations[gp].inputs[p.generations[gp].minor[ip]]) * mpq_class(2));

    const double det_target = std::ldexp(1.0, -d);
    for (const auto& x : probes) {
      if (!in_all_guards(p.generations, gi + 1, x)) {
        ++r.probes_excluded;
        continue;
      }
      try {
        for (int i = 0; i < d; ++i)
          for (int ip = 0; ip < d; ++ip)
            r.kronecker_residual = std::max(r.kronecker_residual, std::abs(kd[i][ip].eval(x) - (i == ip ? 0.5 : 0.0)));
        Mat A(d, d);
        for (int i = 0; i < d; ++i)
          for (int l = 0; l < d; ++l) A(l, i) = g.coeff[i][l].eval(x);
        r.det_residual = std::max(r.det_residual, std::abs(std::abs(g.jac.eval(x) * A.determinant()) - det_target));
        for (const auto& c : g.outputs) r.sup_value = std::max(r.sup_value, std::abs(c.eval(x)));
        for (const auto& c : coeffs) r.max_coeff = std::max(r.max_coeff, std::abs(c.eval(x)));
        ++r.probes_used;
      } catch (const Error&) {
        ++r.probes_excluded;
      }
    }
    bool ok = r.kronecker_exact && r.size1_exact && r.kronecker_residual < threshold && r.det_residual < threshold &&
              r.sup_value <= 1.0 + 1e-9 && r.max_coeff <= 2.0 + 1e-9 && r.components == r.expected_components &&
              r.probes_used > 0;
    rep.pass = rep.pass && ok;
    rep.generations.push_back(std::move(r));
  }
  return rep;
}

ChebyshevResult chebyshev_subset(const std::vector<double>& W, const std::vector<double>& jac,
                                 const std::vector<bool>& in_guard) {
  if (W.size() != jac.size() || W.size() != in_guard.size())
    fail(Errc::DimensionMismatch, "chebyshev_subset: sample arrays differ in length");
  double wsum = 0.0, jsum = 0.0;
  for (std::size_t i = 0; i < W.size(); ++i) {
    if (!in_guard[i]) continue;
    wsum += W[i];
    jsum += std::abs(jac[i]);
  }
  if (!(wsum > 0.0)) fail(Errc::ZeroMeasure, "chebyshev_subset: weight vanishes on the guarded grid");
  ChebyshevResult res;
  res.retained.assign(W.size(), false);
  const double bound = 2.0 * jsum / wsum;
  double kept = 0.0;
  for (std::size_t i = 0; i < W.size(); ++i) {
    if (!in_guard[i] || !(W[i] > 0.0)) continue;
    if (std::abs(jac[i]) / W[i] < bound) {
      res.retained[i] = true;
      kept += W[i];
    }
  }
  res.ratio = kept / wsum;
  return res;
}

std::vector<Point> box_probes(int d, double lo, double hi, int count, std::uint64_t seed) {
  auto rng = stream_rng(seed, 0xF1E1D);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Point> out(count, Point(d));
  for (auto& p : out)
    for (double& v : p) v = u(rng);
  return out;
}

std::vector<RationalFunction> exact_components(const PolynomialMap& f) {
  if (f.d1() != 0) fail(Errc::BadDimensions, "vector field input must not have t variables (d1 = 0)");
  std::vector<RationalFunction> out;
  for (const auto& c : f.components()) out.emplace_back(to_exact(c));
  return out;
}

namespace {

Polynomial<double> restrict_to_t(const Polynomial<double>& p, int n, int d1, const Vec& xstar) {
  Polynomial<double> r(d1);
  for (const auto& [e, c] : p.terms()) {
    double v = c;
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < e[l]; ++j) v *= xstar(l);
    r.add_term(std::vector<int>(e.begin() + n, e.end()), v);
  }
  return r;
}

QPoly poly_det(const std::vector<std::vector<QPoly>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  QPoly acc(m[0][0].nvars());
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    std::vector<std::vector<QPoly>> sub;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<QPoly> row;
      for (std::size_t cc = 0; cc < n; ++cc)
        if (cc != c) row.push_back(m[r][cc]);
      sub.push_back(std::move(row));
    }
    QPoly term = m[0][c] * poly_det(sub);
    acc = c % 2 == 1 ? acc - term : acc + term;
  }
  return acc;
}

QPoly scaled_to_unit(const QPoly& p, double radius) {
  double bound = 0.0;
  for (const auto& [e, c] : p.terms()) {
    int deg = 0;
    for (int v : e) deg += v;
    bound += std::abs(c.get_d()) * std::pow(radius, deg);
  }
  if (bound <= 1.0) return p;
  int ex = static_cast<int>(std::ceil(std::log2(bound)));
  mpz_class pw = 1;
  pw <<= ex;
  return p * mpq_class(mpz_class(1), pw);
}

}  // namespace

std::vector<RationalFunction> parameter_components(const PolynomialMap& phi, const Vec& xstar, double lo,
                                                   double hi) {
  const int n = phi.n(), d1 = phi.d1(), k = phi.k();
  if (d1 < 1) fail(Errc::BadDimensions, "parameter_components: need d1 >= 1");
  if (xstar.size() != n) fail(Errc::DimensionMismatch, "parameter_components: base point dimension");
  std::vector<std::vector<QPoly>> D(k, std::vector<QPoly>(n));
  for (int j = 0; j < k; ++j)
    for (int l = 0; l < n; ++l) D[j][l] = to_exact(restrict_to_t(phi[j].derivative(l), n, d1, xstar));
  const double radius = std::max(std::abs(lo), std::abs(hi));
  std::vector<RationalFunction> out;
  for (const auto& cols : combinations(n, k)) {
    std::vector<std::vector<QPoly>> sub(k);
    for (int j = 0; j < k; ++j)
      for (int c : cols) sub[j].push_back(D[j][c]);
    QPoly m = poly_det(sub);
    if (!m.is_zero()) out.emplace_back(scaled_to_unit(m, radius));
  }
  for (int i = 0; i < d1; ++i) out.emplace_back(scaled_to_unit(QPoly::variable(d1, i), radius));
  return out;
}

}  // namespace curvnd
