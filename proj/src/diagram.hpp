#pragma once

#include "multiindex.hpp"
#include "qcalc.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace curvnd {

struct ScalingPoint {
  int d1 = 0, k = 0, d = 0;
  std::vector<mpq_class> exact;
  Vec approx;
};

ScalingPoint scaling_point(int d1, int k, int d, const mpq_class& s);
// s = dk/n, n = d + k.
ScalingPoint main_scaling_point(int d1, int k, int d);

struct DiagramPoint {
  MultiindexTriple triple;
  double coefficient = 0;
  double margin = 0;  // |coefficient| / |Q|
};

struct DiagramSample {
  BasisTriple bases;
  std::vector<DiagramPoint> points;  // origin first
  std::vector<MultiindexTriple> triples() const;
};

DiagramSample n0_points(const TrilinearForm& Q, const BasisTriple& bases, double eps_coef = 1e-9);

struct HullResult {
  bool inside = false;
  std::vector<double> weights;           // convex weights when inside
  std::vector<std::string> exact_weights;  // filled when decided in rational arithmetic
  Vec separator;                         // gauge-normalized x when outside
  double separation = 0;                 // x.q - max(0, max_p x.p)
  double residual = 0;                   // max |sum theta p - q| when inside
  bool exact = false;
  bool boundary = false;
};

struct HullOptions {
  double tol = 1e-9;
  bool want_exact_weights = false;
};

HullResult hull_membership(const std::vector<MultiindexTriple>& points, const ScalingPoint& query,
                           const HullOptions& opts = {});
HullResult hull_membership(const std::vector<MultiindexTriple>& points, const std::vector<double>& query,
                           const HullOptions& opts = {});

struct Witness {
  BasisTriple bases;  // orthonormal eigenvector bases
  Vec x;              // eigenvalues, concatenated (u; v; w)
  Mat D1, D2, D3;     // in ambient coordinates
  double predicted_rate = 0;
};

Witness witness_from_functional(const BasisTriple& bases, const Vec& x);

struct DecayReport {
  std::vector<double> taus;
  std::vector<double> log_ratios;
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
  double asymptotic_rate = 0;
  bool accepted = false;
};

// log of the normalized ratio along the flow, from coefficients at the base bases.
double witness_log_ratio(const TrilinearForm& Q, const Witness& w, double tau);
DecayReport witness_check(const TrilinearForm& Q, const Witness& w, const std::vector<double>& tau_grid,
                          double slope_floor = 1e-3);

std::vector<double> default_tau_grid(double tau_max = 10.0, int points = 21);

enum class VerdictStatus { Nondegenerate, Degenerate, Inconclusive };
const char* verdict_name(VerdictStatus s);

struct VerdictConfig {
  int n_samples = 256;
  int optimizer_iters = 300;
  int restarts = 4;
  int certificate_size = 4;
  double eps_coef = 1e-9;
  double margin_floor = 1e-3;
  double snap_threshold = 5e-2;
  double slope_floor = 1e-3;
  double hull_tol = 1e-9;
  double tau_max = 10.0;
  std::uint64_t seed = 1;
  int threads = 0;
};

struct Ensemble {
  BasisTriple bases;
  double margin = 0;
  std::vector<MultiindexTriple> triples;
  std::vector<double> weights;
  std::vector<std::string> exact_weights;
  std::vector<double> coefficients;
  double residual = 0;
};

struct SearchStats {
  int samples = 0;
  int optimizer_runs = 0;
  int objective_evaluations = 0;
  int snap_attempts = 0;
  int lp_solves = 0;
  int exact_fallbacks = 0;
  int boundary_cases = 0;
  double min_margin = 0;
  bool budget_exhausted = false;
};

struct Verdict {
  VerdictStatus status = VerdictStatus::Inconclusive;
  std::vector<Ensemble> certificate;
  std::optional<Witness> witness;
  std::optional<DecayReport> decay;
  std::vector<double> margins;  // worst margins reached by the search
  SearchStats stats;
  std::string note;
};

Verdict verdict(const TrilinearForm& Q, const VerdictConfig& cfg = {});

// Bottleneck margin of one orthonormal triple: the largest threshold m such
// that o_s stays in the hull of the origin and the points with margin >= m.
struct BasisEval {
  double margin = 0;
  bool outside = false;
  std::size_t prefix = 0;
  DiagramSample sample;  // points sorted by decreasing margin after the origin
};

BasisEval evaluate_bases(const TrilinearForm& Q, const BasisTriple& bases, const ScalingPoint& os, double eps_coef,
                         double hull_tol = 1e-9);

struct InfimumOptions {
  int samples = 64;
  int restarts = 2;
  int iters = 120;
  std::uint64_t seed = 7;
  int threads = 0;
};

// min over log-scalings for fixed orthonormal bases, as log of the ratio.
double min_log_ratio_over_scalings(const TrilinearForm& Q, const BasisTriple& bases);
// Estimate of the infimum of the normalized ratio over all bases.
double infimum_ratio(const TrilinearForm& Q, const InfimumOptions& opts = {});

struct StabilityReport {
  double c0 = 0;
  double c = 0;
  double radius = 0;
  double largest_stable_radius = 0;
  int perturbations = 0;
};

StabilityReport stability_margin(const TrilinearForm& Q, double radius, const VerdictConfig& cfg = {},
                                 int perturbations = 12);

// Orthonormal triple for search: bases obtained from Gaussian-mapped Sobol points.
std::vector<BasisTriple> sobol_bases(int d1, int k, int d, int count, std::uint64_t seed);

}  // namespace curvnd
