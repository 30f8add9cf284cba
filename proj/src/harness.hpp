#pragma once

#include "diagram.hpp"
#include "multilinear.hpp"
#include "polynomial.hpp"
#include "qcalc.hpp"
#include "radonmap.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace curvnd {

double unit_ball_volume(int k);

// |B_k| sqrt(sum over k-subsets of |det(L omega_I)|^2).
double ellipsoid_image_volume(const Mat& L, const VectorList& omega);
// |B_k| sqrt(det (L omega)(L omega)^T).
double ellipsoid_image_volume_gram(const Mat& L, const VectorList& omega);

struct SublevelFilter {
  double c = 0;         // relative threshold
  double sup = 0;       // sampled sup of |P| over the ellipsoid
  double threshold = 0; // c * sup
  std::vector<bool> retained;
  double retained_fraction = 1;
};

// Samples are points of the ellipsoid. At most a fraction eps of them
// satisfies |P| < c sup|P|; the retained set is the complement.
SublevelFilter sublevel_filter(const Polynomial<double>& P, const std::vector<Vec>& samples, double eps);

// One-parameter diagonal flow acting on orthonormal bases.
struct ScalingFlow {
  BasisTriple bases;
  Vec xu, xv, xw;
  bool traceless = true;  // trace(D2) = trace(D3) = 0, trace(D1) > 0 required
};

ScalingFlow flow_from_witness(const Witness& w);
// x_u = 1, x_v = -1, x_w = 0: a pure dilation of the model.
ScalingFlow isotropic_flow(int d1, int k, int d);

struct KnappFamily {
  double tau = 0;
  int d1 = 0, k = 0, d = 0;
  Mat E;      // d1 x d1, columns e^{tau D1} u_i
  Mat omega;  // n x n, columns (e^{tau D3} w_i, 0) then (0, e^{-tau D2} v_i)
  TrilinearForm theta;
  std::vector<Polynomial<double>> filters;
  std::vector<double> thresholds;
  double volume_E = 0, volume_F = 0;
  double det_u = 0, det_v = 0, det_w = 0;
  double retained_fraction = 1;

  int n() const { return d + k; }
  // L_t = [Theta(t, .) | I], k x n.
  Mat L(const Vec& t) const;
  bool retained(const Vec& t) const;
};

struct KnappOptions {
  int filter_samples = 1 << 14;
  std::uint64_t seed = 1;
};

KnappFamily knapp_family(const TrilinearForm& theta, const ScalingFlow& flow, double tau, const KnappOptions& opts = {});

enum class RatioMethod { MonteCarlo, Grid };

struct RatioEstimate {
  double value = 0;
  double stderr_ = 0;
  double log_value = 0;
  double log_stderr = 0;
  double numerator = 0;
  double G_volume = 0;
  std::size_t samples = 0;
};

struct RatioOptions {
  RatioMethod method = RatioMethod::MonteCarlo;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  int threads = 0;
  double max_relative_se = 0.2;
};

// Exponents are p_b and q'_b for the family's dimensions.
RatioEstimate incidence_ratio(const KnappFamily& fam, const RatioOptions& opts = {});

struct LinearFit {
  double slope = 0, intercept = 0, slope_stderr = 0;
};

// OLS fit; the slope error adds the residual scatter and the per-point errors.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& yerr);

struct RatioSeries {
  std::vector<double> taus, ratios, stderrs, log_ratios, log_stderrs;
  LinearFit fit;
  double ci_width = 0;  // 95% half width of the slope
  std::string flow;
};

RatioSeries ratio_series(const TrilinearForm& theta, const ScalingFlow& flow, const std::vector<double>& taus,
                         const RatioOptions& ropts = {}, const KnappOptions& kopts = {});

// Testing integral.
enum class CutoffKind { Box, Bump, Zero };
struct Cutoff {
  CutoffKind kind = CutoffKind::Box;
  double radius = 1.0;  // support is the cube of this half width in every coordinate
};

struct TestingValue {
  double value = 0;
  double error = 0;
  bool divergent = false;
};

struct TestingOptions {
  double rel_tol = 1e-7;
  int max_regions = 400;
  int mc_samples = 200000;  // used when d1 > 3
  std::uint64_t seed = 1;
};

// Compiled derivative data for repeated integrals.
class TestingProblem {
public:
  TestingProblem(const PolynomialMap& phi, Cutoff eta, double p_dual);
  const PolynomialMap& map() const { return phi_; }
  double p_dual() const { return pd_; }
  const Cutoff& cutoff() const { return eta_; }
  // Integrand at t for base x and basis omega (|det omega| = 1 checked by caller).
  double integrand(const Vec& x, const Mat& omega, const Vec& t, bool& capped) const;
  TestingValue integral(const Vec& x, const Mat& omega, const TestingOptions& opts = {}) const;

private:
  double eta(const Vec& x, const Vec& t, const Vec& y) const;
  PolynomialMap phi_;
  Cutoff eta_;
  double pd_;
  std::vector<std::vector<Polynomial<double>>> dx_;
};

inline constexpr double kIntegrandCap = 1e12;

TestingValue testing_integral(const PolynomialMap& phi, const Cutoff& eta, const Vec& x, const Mat& omega,
                              double p_dual, const TestingOptions& opts = {});

struct SupOptions {
  int x_samples = 4;
  int basis_samples = 48;
  int polish = 2;
  int polish_iters = 60;
  std::uint64_t seed = 1;
  int threads = 0;
  TestingOptions quad;
};

struct SupResult {
  double value = 0;
  double error = 0;
  Vec x;
  Mat omega;
  Vec stretch;  // traceless unit direction a
  bool divergent = false;
  bool budget_exhausted = false;
  int evaluations = 0;
};

// sup over x and omega = O diag(e^{tau a}) with O orthogonal, a traceless unit.
SupResult testing_sup_search(const TestingProblem& prob, const Vec& xstar, double tau, const SupOptions& opts = {});

struct TestingSweep {
  std::vector<double> taus, sups, errors;
  double baseline = 0;
  double max_ratio = 0;
  LinearFit log_fit;
  bool stable = false;
  bool monotone = false;
  bool unbounded_trend = false;
  bool divergent = false;
};

TestingSweep testing_sweep(const TestingProblem& prob, const Vec& xstar, const std::vector<double>& taus,
                           const SupOptions& opts = {});

}  // namespace curvnd
