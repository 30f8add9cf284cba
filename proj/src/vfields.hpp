#pragma once

#include "multilinear.hpp"
#include "radonmap.hpp"
#include "rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace curvnd {

using Point = std::vector<double>;

struct MinorChoice {
  std::vector<int> minor;  // indices into the component list, increasing
  double mean_abs_jac = 0;
};

// Gradients of each component, kept exact for later evaluation.
using GradientTable = std::vector<std::vector<RationalFunction>>;
GradientTable gradients(const std::vector<RationalFunction>& f);

// Largest |d x d minor| of the gradient rows at x, and the chosen minor's value.
double max_abs_minor(const GradientTable& g, const Point& x);
double minor_value(const GradientTable& g, const std::vector<int>& minor, const Point& x);

MinorChoice select_minor(const std::vector<RationalFunction>& f, const std::vector<Point>& probes);

struct VFGeneration {
  int N = 0;
  int d = 0;
  std::vector<RationalFunction> inputs;  // components of f^(N-1)
  GradientTable input_grads;
  std::vector<int> minor;
  RationalFunction jac;
  std::vector<std::vector<RationalFunction>> coeff;  // coeff[i][l] = X_i x^l
  std::vector<RationalFunction> outputs;             // components of f^(N)

  RationalFunction apply(int i, const RationalFunction& phi) const;
  // max_I |jac_I| < 2 |jac_J| at x.
  bool in_guard(const Point& x) const;
};

VFGeneration gen1_fields(const std::vector<RationalFunction>& f, const std::vector<int>& minor, int N = 1);
VFGeneration iterate_generation(const std::vector<VFGeneration>& state, const std::vector<Point>& probes);

struct VFPipeline {
  std::vector<RationalFunction> f;
  std::vector<VFGeneration> generations;
};

// Builds generations 1..N. Probes are the E_0 samples; selection at each
// generation uses the probes lying in every earlier guard.
VFPipeline build_generations(const std::vector<RationalFunction>& f, int N, const std::vector<Point>& probes);

struct VFGenerationReport {
  int N = 0;
  std::vector<int> minor;
  std::size_t components = 0;
  std::size_t expected_components = 0;
  bool kronecker_exact = false;
  bool size1_exact = false;
  double kronecker_residual = 0;
  double det_residual = 0;
  double sup_value = 0;
  double max_coeff = 0;  // inter-generation coefficients
  std::size_t probes_used = 0;
  std::size_t probes_excluded = 0;
};

struct VFReport {
  std::vector<VFGenerationReport> generations;
  bool pass = false;
};

VFReport verify_identities(const VFPipeline& p, const std::vector<Point>& probes, double threshold = 1e-8);

struct ChebyshevResult {
  std::vector<bool> retained;
  double ratio = 0;  // W(E_1) / W(E_0 cap U)
};

// Grid cells of equal measure. Cells outside the guard are never retained.
ChebyshevResult chebyshev_subset(const std::vector<double>& W, const std::vector<double>& jac,
                                 const std::vector<bool>& in_guard);

std::vector<Point> box_probes(int d, double lo, double hi, int count, std::uint64_t seed);

std::vector<RationalFunction> exact_components(const PolynomialMap& f);

// Components in the parameters t used by the analysis pipeline: every k x k
// minor of D_x phi(x*, t) and the coordinates t^i, scaled by powers of two so
// that they are bounded by 1 on the box.
std::vector<RationalFunction> parameter_components(const PolynomialMap& phi, const Vec& xstar, double lo,
                                                   double hi);

}  // namespace curvnd
