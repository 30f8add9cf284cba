#include "analysis.hpp"

#include "error.hpp"
#include "harness.hpp"
#include "vfields.hpp"

#include <cctype>
#include <cmath>
#include <set>

namespace curvnd {

using ojson = nlohmann::ordered_json;

namespace {

ojson num(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson vec_json(const Vec& v) {
  ojson a = ojson::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

ojson mat_json(const Mat& m) {
  ojson a = ojson::array();
  for (int i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i).transpose()));
  return a;
}

ojson dvec_json(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::string q_str(const mpq_class& q) { return q.get_str(); }

std::string series_csv(const std::vector<double>& taus, const std::vector<double>& vals,
                       const std::vector<double>& errs) {
  std::string s = "tau,value,stderr\n";
  for (std::size_t i = 0; i < taus.size(); ++i)
    s += format_double(taus[i]) + "," + format_double(vals[i]) + "," + format_double(errs[i]) + "\n";
  return s;
}

std::vector<double> integer_taus(int tmax) {
  std::vector<double> t;
  for (int i = 0; i <= tmax; ++i) t.push_back(i);
  return t;
}

BasePoint base_point(const PolynomialMap& phi, const AnalysisConfig& c) {
  BasePoint p;
  p.x = c.point_x ? *c.point_x : Vec(Vec::Zero(phi.n()));
  p.t = c.point_t ? *c.point_t : Vec(Vec::Zero(phi.d1()));
  if (p.x.size() != phi.n() || p.t.size() != phi.d1())
    fail(Errc::DimensionMismatch, "base point does not match the map dimensions");
  return p;
}

VerdictConfig verdict_config(const AnalysisConfig& c) {
  VerdictConfig v;
  v.n_samples = c.samples;
  v.optimizer_iters = c.optimizer_iters;
  v.restarts = c.restarts;
  v.certificate_size = c.certificate_size;
  v.eps_coef = c.eps_coef;
  v.margin_floor = c.margin_floor;
  v.snap_threshold = c.snap_threshold;
  v.slope_floor = c.slope_floor;
  v.hull_tol = c.hull_tol;
  v.tau_max = c.tau_max;
  v.seed = c.seed;
  v.threads = c.threads;
  return v;
}

ojson triple_json(const MultiindexTriple& t) { return ojson{{"alpha", t.alpha}, {"beta", t.beta}, {"gamma", t.gamma}}; }

ojson bases_json(const BasisTriple& b) {
  return ojson{{"u", mat_json(b.u.matrix())}, {"v", mat_json(b.v.matrix())}, {"w", mat_json(b.w.matrix())}};
}

std::string status_text(VerdictStatus s) {
  std::string t = verdict_name(s);
  for (auto& ch : t) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return t;
}

ojson verdict_json(const Verdict& v, const VerdictConfig& vc) {
  ojson j;
  j["status"] = status_text(v.status);
  j["note"] = v.note;
  j["min_margin"] = num(v.stats.min_margin);
  j["margin_floor"] = vc.margin_floor;
  j["margins"] = dvec_json(v.margins);
  j["search"] = ojson{{"samples", v.stats.samples},
                      {"optimizer_runs", v.stats.optimizer_runs},
                      {"objective_evaluations", v.stats.objective_evaluations},
                      {"snap_attempts", v.stats.snap_attempts},
                      {"budget_exhausted", v.stats.budget_exhausted},
                      {"hull_tol", vc.hull_tol},
                      {"eps_coef", vc.eps_coef}};
  ojson cert = ojson::array();
  for (const auto& e : v.certificate) {
    ojson ej;
    ej["bases"] = bases_json(e.bases);
    ej["margin"] = num(e.margin);
    ojson pts = ojson::array();
    for (std::size_t i = 0; i < e.triples.size(); ++i)
      pts.push_back(ojson{{"triple", triple_json(e.triples[i])},
                          {"weight", num(e.weights[i])},
                          {"weight_exact", e.exact_weights[i]},
                          {"coefficient", num(e.coefficients[i])}});
    ej["points"] = pts;
    ej["residual"] = num(e.residual);
    cert.push_back(ej);
  }
  j["certificate"] = cert;
  if (v.witness) {
    const Witness& w = *v.witness;
    j["witness"] = ojson{{"bases", bases_json(w.bases)},
                         {"eigenvalues", vec_json(w.x)},
                         {"D1", mat_json(w.D1)},
                         {"D2", mat_json(w.D2)},
                         {"D3", mat_json(w.D3)},
                         {"predicted_rate", num(w.predicted_rate)}};
  } else {
    j["witness"] = nullptr;
  }
  if (v.decay) {
    const DecayReport& d = *v.decay;
    j["decay"] = ojson{{"taus", dvec_json(d.taus)},
                       {"log_ratios", dvec_json(d.log_ratios)},
                       {"slope", num(d.slope)},
                       {"slope_stderr", num(d.slope_stderr)},
                       {"intercept", num(d.intercept)},
                       {"asymptotic_rate", num(d.asymptotic_rate)},
                       {"slope_floor", vc.slope_floor},
                       {"accepted", d.accepted}};
  } else {
    j["decay"] = nullptr;
  }
  return j;
}

ojson exponents_json(const ExponentSet& e) {
  return ojson{{"p", q_str(e.p)},
               {"q", q_str(e.q)},
               {"p_dual", q_str(e.p_dual)},
               {"q_dual", q_str(e.q_dual)},
               {"approx", {{"p", e.p.get_d()}, {"q", e.q.get_d()}, {"p_dual", e.p_dual.get_d()}, {"q_dual", e.q_dual.get_d()}}}};
}

ojson header(const char* command, const PolynomialMap& phi, const AnalysisConfig& cfg) {
  ojson j;
  j["schema"] = kReportSchema;
  j["command"] = command;
  j["map"] = ojson{{"n", phi.n()}, {"d1", phi.d1()}, {"k", phi.k()}, {"degree", phi.degree()}, {"text", map_to_text(phi)}};
  // Thread count is left out so reports match across machines.
  j["config"] = config_to_json(cfg);
  j["config"].erase("threads");
  return j;
}

ojson q_json(const QExtraction& qe, const ModelMap& mm) {
  ojson j;
  j["d1"] = qe.Q.d1();
  j["k"] = qe.Q.k();
  j["d"] = qe.Q.d();
  j["coefficients"] = dvec_json(qe.Q.coeffs());
  j["layout"] = "index (i*k + i')*d + i''";
  j["kernel_basis"] = mat_json(qe.kernel.transpose());
  j["kernel_convention"] = "pivoted Cholesky on the kernel projector, then polar factor; columns follow pivot index";
  j["rank_tol"] = kRankTol;
  j["Dx"] = mat_json(qe.Dx);
  j["model"] = ojson{{"M", mat_json(mm.M)}, {"normalized", mm.normalized}, {"theta_norm", dvec_json(mm.theta_norm.coeffs())}};
  return j;
}

struct Core {
  BasePoint bp;
  QExtraction qe;
  ModelMap mm;
  VerdictConfig vc;
  Verdict v;
};

Core core(const PolynomialMap& phi, const AnalysisConfig& cfg) {
  Core c;
  c.bp = base_point(phi, cfg);
  c.qe = extract_q(phi, c.bp);
  c.mm = model_map(phi, c.bp);
  c.vc = verdict_config(cfg);
  c.v = verdict(c.qe.Q, c.vc);
  return c;
}

void add_core(ojson& j, const PolynomialMap& phi, const Core& c) {
  j["base_point"] = ojson{{"x", vec_json(c.bp.x)}, {"t", vec_json(c.bp.t)}};
  j["q"] = q_json(c.qe, c.mm);
  j["exponents"] = exponents_json(best_exponents(phi.n(), phi.k(), phi.d1()));
  j["verdict"] = verdict_json(c.v, c.vc);
  HormanderReport h = hormander_check(phi, c.bp);
  j["hormander"] = ojson{{"dimension", h.dimension}, {"target", h.target}, {"spans", h.spans}};
}

ojson knapp_section(const PolynomialMap& phi, const Core& c, const AnalysisConfig& cfg, Report& rep) {
  // The model normalizes M to the identity; its verdict supplies the flow.
  Verdict vn = c.mm.normalized ? c.v : verdict(c.mm.theta_norm, c.vc);
  ScalingFlow flow = (vn.status == VerdictStatus::Degenerate && vn.witness)
                         ? flow_from_witness(*vn.witness)
                         : isotropic_flow(phi.d1(), phi.k(), phi.n() - phi.k());
  RatioOptions ro;
  if (cfg.harness_method == "grid")
    ro.method = RatioMethod::Grid;
  ro.samples = static_cast<std::size_t>(cfg.harness_samples);
  ro.seed = cfg.seed;
  ro.threads = cfg.threads;
  ro.max_relative_se = cfg.max_relative_se;
  KnappOptions ko;
  ko.seed = cfg.seed;
  RatioSeries s = ratio_series(c.mm.theta_norm, flow, integer_taus(cfg.harness_tau_max), ro, ko);
  ojson j;
  j["flow"] = s.flow;
  j["flow_eigenvalues"] = ojson{{"u", vec_json(flow.xu)}, {"v", vec_json(flow.xv)}, {"w", vec_json(flow.xw)}};
  j["method"] = cfg.harness_method;
  j["samples_per_tau"] = cfg.harness_samples;
  j["taus"] = dvec_json(s.taus);
  j["ratios"] = dvec_json(s.ratios);
  j["stderr"] = dvec_json(s.stderrs);
  j["log_ratios"] = dvec_json(s.log_ratios);
  j["log_stderr"] = dvec_json(s.log_stderrs);
  j["slope"] = num(s.fit.slope);
  j["slope_stderr"] = num(s.fit.slope_stderr);
  j["slope_ci95"] = num(s.ci_width);
  if (vn.decay) {
    double p = best_exponents(phi.n(), phi.k(), phi.d1()).p.get_d();
    j["predicted_slope"] = num(-vn.decay->slope / p);
  } else {
    j["predicted_slope"] = 0.0;
  }
  rep.csv["knapp"] = series_csv(s.taus, s.ratios, s.stderrs);
  return j;
}

Cutoff parse_cutoff(const AnalysisConfig& cfg) {
  Cutoff c;
  c.radius = cfg.cutoff_radius;
  if (cfg.cutoff == "box")
    c.kind = CutoffKind::Box;
  else if (cfg.cutoff == "bump")
    c.kind = CutoffKind::Bump;
  else if (cfg.cutoff == "zero")
    c.kind = CutoffKind::Zero;
  else
    fail(Errc::InvalidArgument, "cutoff must be box, bump or zero");
  return c;
}

ojson testing_section(const PolynomialMap& phi, const BasePoint& bp, const AnalysisConfig& cfg, Report& rep) {
  const double pd = best_exponents(phi.n(), phi.k(), phi.d1()).p_dual.get_d();
  TestingProblem prob(phi, parse_cutoff(cfg), pd);
  SupOptions so;
  so.seed = cfg.seed;
  so.threads = cfg.threads;
  so.basis_samples = cfg.sup_basis_samples;
  so.x_samples = cfg.sup_x_samples;
  so.quad.rel_tol = cfg.quad_rel_tol;
  so.quad.seed = cfg.seed;
  TestingSweep s = testing_sweep(prob, bp.x, integer_taus(cfg.testing_tau_max), so);
  ojson j;
  j["cutoff"] = cfg.cutoff;
  j["cutoff_radius"] = cfg.cutoff_radius;
  j["p_dual"] = pd;
  j["baseline"] = num(s.baseline);
  j["taus"] = dvec_json(s.taus);
  j["sups"] = dvec_json(s.sups);
  j["stderr"] = dvec_json(s.errors);
  j["quad_rel_tol"] = cfg.quad_rel_tol;
  j["max_ratio"] = num(s.max_ratio);
  j["stable"] = s.stable;
  j["monotone"] = s.monotone;
  j["unbounded_trend"] = s.unbounded_trend;
  j["log_slope"] = num(s.log_fit.slope);
  j["log_slope_stderr"] = num(s.log_fit.slope_stderr);
  j["divergent"] = s.divergent;
  j["integrand_cap"] = kIntegrandCap;
  rep.csv["testing"] = series_csv(s.taus, s.sups, s.errors);
  return j;
}

ojson vfields_json(const VFPipeline& p, const VFReport& r, double lo, double hi, const AnalysisConfig& cfg) {
  ojson j;
  j["components"] = p.f.size();
  j["variables"] = p.f.empty() ? 0 : p.f[0].nvars();
  j["box"] = {lo, hi};
  j["probes"] = cfg.probes;
  j["threshold"] = cfg.vf_threshold;
  ojson gens = ojson::array();
  for (const auto& g : r.generations)
    gens.push_back(ojson{{"N", g.N},
                         {"minor", g.minor},
                         {"components", g.components},
                         {"expected_components", g.expected_components},
                         {"kronecker_exact", g.kronecker_exact},
                         {"size1_exact", g.size1_exact},
                         {"kronecker_residual", num(g.kronecker_residual)},
                         {"det_residual", num(g.det_residual)},
                         {"sup_value", num(g.sup_value)},
                         {"max_coefficient", num(g.max_coeff)},
                         {"probes_used", g.probes_used},
                         {"probes_excluded", g.probes_excluded}});
  j["generations"] = gens;
  j["pass"] = r.pass;
  j["constants"] = ojson{{"c_Nd", "2^-N (d+1)^(-d N (N-1)/2)"}, {"measure_factor", "m^(-N d)"}};
  return j;
}

ojson vfields_section(const std::vector<RationalFunction>& f, double lo, double hi, const AnalysisConfig& cfg,
                      bool& pass) {
  const int d = f.at(0).nvars();
  auto probes = box_probes(d, lo, hi, cfg.probes, cfg.seed);
  VFPipeline p = build_generations(f, cfg.generations, probes);
  VFReport r = verify_identities(p, probes, cfg.vf_threshold);
  ojson j = vfields_json(p, r, lo, hi, cfg);
  double in_sup = 0.0;
  for (const auto& x : probes)
    for (const auto& c : f) in_sup = std::max(in_sup, std::abs(c.eval(x)));
  j["input_sup"] = num(in_sup);

  // Discrete Chebyshev step for the first generation with W = 1.
  const int cells = d == 1 ? 1000 : d == 2 ? 32 : 10;
  std::vector<double> W, jac;
  std::vector<bool> guard;
  std::vector<int> idx(d, 0);
  const auto& g1 = p.generations.front();
  while (true) {
    Point x(d);
    for (int i = 0; i < d; ++i) x[i] = lo + (hi - lo) * (idx[i] + 0.5) / cells;
    W.push_back(1.0);
    bool in = g1.in_guard(x);
    guard.push_back(in);
    jac.push_back(in ? minor_value(g1.input_grads, g1.minor, x) : 0.0);
    int i = 0;
    while (i < d && ++idx[i] == cells) idx[i++] = 0;
    if (i == d) break;
  }
  ChebyshevResult ch = chebyshev_subset(W, jac, guard);
  j["chebyshev_ratio"] = num(ch.ratio);
  pass = r.pass;
  return j;
}

}  // namespace

int exit_code_for(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Nondegenerate:
      return 0;
    case VerdictStatus::Degenerate:
      return 2;
    case VerdictStatus::Inconclusive:
      return 3;
  }
  return 1;
}

Report analyze(const PolynomialMap& phi, const AnalysisConfig& cfg) {
  Report rep;
  rep.json = header("analyze", phi, cfg);
  Core c = core(phi, cfg);
  add_core(rep.json, phi, c);
  if (cfg.with_harness) rep.json["harness"] = knapp_section(phi, c, cfg, rep);
  if (cfg.with_testing) rep.json["testing"] = testing_section(phi, c.bp, cfg, rep);
  if (cfg.with_vfields) {
    double lo = c.bp.t.minCoeff() - 0.5, hi = c.bp.t.maxCoeff() + 0.5;
    bool pass = false;
    auto f = parameter_components(phi, c.bp.x, lo, hi);
    rep.json["vfields"] = vfields_section(f, lo, hi, cfg, pass);
  }
  rep.has_verdict = true;
  rep.status = c.v.status;
  rep.exit_code = exit_code_for(c.v.status);
  return rep;
}

Report run_knapp(const PolynomialMap& phi, const AnalysisConfig& cfg) {
  Report rep;
  rep.json = header("knapp", phi, cfg);
  Core c = core(phi, cfg);
  add_core(rep.json, phi, c);
  rep.json["harness"] = knapp_section(phi, c, cfg, rep);
  rep.has_verdict = true;
  rep.status = c.v.status;
  rep.exit_code = exit_code_for(c.v.status);
  return rep;
}

Report run_testing(const PolynomialMap& phi, const AnalysisConfig& cfg) {
  Report rep;
  rep.json = header("testing", phi, cfg);
  BasePoint bp = base_point(phi, cfg);
  rep.json["base_point"] = ojson{{"x", vec_json(bp.x)}, {"t", vec_json(bp.t)}};
  rep.json["exponents"] = exponents_json(best_exponents(phi.n(), phi.k(), phi.d1()));
  rep.json["testing"] = testing_section(phi, bp, cfg, rep);
  rep.exit_code = 0;
  return rep;
}

Report run_vfields(const PolynomialMap& phi, const AnalysisConfig& cfg) {
  Report rep;
  rep.json = header("vfields", phi, cfg);
  double lo = 0.0, hi = 0.5;
  if (phi.box) std::tie(lo, hi) = *phi.box;
  bool pass = false;
  rep.json["vfields"] = vfields_section(exact_components(phi), lo, hi, cfg, pass);
  rep.exit_code = pass ? 0 : 3;
  return rep;
}

AnalysisConfig config_from_json(const std::string& text) {
  AnalysisConfig c;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return c;
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, std::string("config: ") + e.what());
  }
  if (!j.is_object()) fail(Errc::ParseError, "config: expected an object");
  auto positive = [](const char* key, double v) {
    if (!(v > 0)) fail(Errc::InvalidArgument, std::string("config: ") + key + " must be positive");
  };
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const ojson& v = it.value();
      if (k == "point") {
        if (v.contains("x")) {
          auto x = v.at("x").get<std::vector<double>>();
          c.point_x = Eigen::Map<const Vec>(x.data(), static_cast<Eigen::Index>(x.size()));
        }
        if (v.contains("t")) {
          auto t = v.at("t").get<std::vector<double>>();
          c.point_t = Eigen::Map<const Vec>(t.data(), static_cast<Eigen::Index>(t.size()));
        }
      } else if (k == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (k == "threads") {
        c.threads = v.get<int>();
        if (c.threads < 0) fail(Errc::InvalidArgument, "config: threads must be nonnegative");
      } else if (k == "samples") {
        c.samples = v.get<int>();
        positive("samples", c.samples);
      } else if (k == "optimizer_iters") {
        c.optimizer_iters = v.get<int>();
        positive("optimizer_iters", c.optimizer_iters);
      } else if (k == "restarts") {
        c.restarts = v.get<int>();
        positive("restarts", c.restarts);
      } else if (k == "certificate_size") {
        c.certificate_size = v.get<int>();
        positive("certificate_size", c.certificate_size);
      } else if (k == "tau_max") {
        c.tau_max = v.get<double>();
        positive("tau_max", c.tau_max);
      } else if (k == "eps_coef") {
        c.eps_coef = v.get<double>();
        positive("eps_coef", c.eps_coef);
      } else if (k == "margin_floor") {
        c.margin_floor = v.get<double>();
        positive("margin_floor", c.margin_floor);
      } else if (k == "snap_threshold") {
        c.snap_threshold = v.get<double>();
        positive("snap_threshold", c.snap_threshold);
      } else if (k == "slope_floor") {
        c.slope_floor = v.get<double>();
        positive("slope_floor", c.slope_floor);
      } else if (k == "hull_tol") {
        c.hull_tol = v.get<double>();
        positive("hull_tol", c.hull_tol);
      } else if (k == "harness") {
        c.with_harness = v.get<bool>();
      } else if (k == "harness_samples") {
        c.harness_samples = v.get<int>();
        positive("harness_samples", c.harness_samples);
      } else if (k == "harness_tau_max") {
        c.harness_tau_max = v.get<int>();
        if (c.harness_tau_max < 4) fail(Errc::InvalidArgument, "config: harness_tau_max must be at least 4");
      } else if (k == "harness_method") {
        c.harness_method = v.get<std::string>();
        if (c.harness_method != "montecarlo" && c.harness_method != "grid")
          fail(Errc::InvalidArgument, "config: harness_method must be montecarlo or grid");
      } else if (k == "max_relative_se") {
        c.max_relative_se = v.get<double>();
        positive("max_relative_se", c.max_relative_se);
      } else if (k == "testing") {
        c.with_testing = v.get<bool>();
      } else if (k == "testing_tau_max") {
        c.testing_tau_max = v.get<int>();
        positive("testing_tau_max", c.testing_tau_max);
      } else if (k == "cutoff") {
        c.cutoff = v.get<std::string>();
        if (c.cutoff != "box" && c.cutoff != "bump" && c.cutoff != "zero")
          fail(Errc::InvalidArgument, "config: cutoff must be box, bump or zero");
      } else if (k == "cutoff_radius") {
        c.cutoff_radius = v.get<double>();
        positive("cutoff_radius", c.cutoff_radius);
      } else if (k == "quad_rel_tol") {
        c.quad_rel_tol = v.get<double>();
        positive("quad_rel_tol", c.quad_rel_tol);
      } else if (k == "sup_basis_samples") {
        c.sup_basis_samples = v.get<int>();
        positive("sup_basis_samples", c.sup_basis_samples);
      } else if (k == "sup_x_samples") {
        c.sup_x_samples = v.get<int>();
        positive("sup_x_samples", c.sup_x_samples);
      } else if (k == "vfields") {
        c.with_vfields = v.get<bool>();
      } else if (k == "generations") {
        c.generations = v.get<int>();
        if (c.generations < 1 || c.generations > 3) fail(Errc::InvalidArgument, "config: generations must be 1..3");
      } else if (k == "probes") {
        c.probes = v.get<int>();
        positive("probes", c.probes);
      } else if (k == "vf_threshold") {
        c.vf_threshold = v.get<double>();
        positive("vf_threshold", c.vf_threshold);
      } else {
        fail(Errc::InvalidArgument, "config: unknown key '" + k + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, std::string("config: ") + e.what());
  }
  return c;
}

ojson config_to_json(const AnalysisConfig& c) {
  ojson j;
  if (c.point_x || c.point_t) {
    ojson p;
    if (c.point_x) p["x"] = vec_json(*c.point_x);
    if (c.point_t) p["t"] = vec_json(*c.point_t);
    j["point"] = p;
  }
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["optimizer_iters"] = c.optimizer_iters;
  j["restarts"] = c.restarts;
  j["certificate_size"] = c.certificate_size;
  j["tau_max"] = c.tau_max;
  j["eps_coef"] = c.eps_coef;
  j["margin_floor"] = c.margin_floor;
  j["snap_threshold"] = c.snap_threshold;
  j["slope_floor"] = c.slope_floor;
  j["hull_tol"] = c.hull_tol;
  j["harness"] = c.with_harness;
  j["harness_samples"] = c.harness_samples;
  j["harness_tau_max"] = c.harness_tau_max;
  j["harness_method"] = c.harness_method;
  j["max_relative_se"] = c.max_relative_se;
  j["testing"] = c.with_testing;
  j["testing_tau_max"] = c.testing_tau_max;
  j["cutoff"] = c.cutoff;
  j["cutoff_radius"] = c.cutoff_radius;
  j["quad_rel_tol"] = c.quad_rel_tol;
  j["sup_basis_samples"] = c.sup_basis_samples;
  j["sup_x_samples"] = c.sup_x_samples;
  j["vfields"] = c.with_vfields;
  j["generations"] = c.generations;
  j["probes"] = c.probes;
  j["vf_threshold"] = c.vf_threshold;
  return j;
}

}  // namespace curvnd
