#pragma once

#include "diagram.hpp"
#include "radonmap.hpp"

#include "json.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace curvnd {

inline constexpr const char* kReportSchema = "curvnd.report/1";

struct AnalysisConfig {
  std::optional<Vec> point_x, point_t;  // default: origin
  std::uint64_t seed = 1;
  int threads = 0;

  // verdict
  int samples = 256;
  int optimizer_iters = 300;
  int restarts = 4;
  int certificate_size = 4;
  double tau_max = 10.0;
  double eps_coef = 1e-9;
  double margin_floor = 1e-3;
  double snap_threshold = 5e-2;
  double slope_floor = 1e-3;
  double hull_tol = 1e-9;

  // Knapp harness
  bool with_harness = false;
  int harness_samples = 100000;
  int harness_tau_max = 6;
  std::string harness_method = "montecarlo";
  double max_relative_se = 0.2;

  // testing integral
  bool with_testing = false;
  int testing_tau_max = 8;
  std::string cutoff = "box";
  double cutoff_radius = 1.0;
  double quad_rel_tol = 1e-7;
  int sup_basis_samples = 48;
  int sup_x_samples = 4;

  // vector fields
  bool with_vfields = false;
  int generations = 2;
  int probes = 1000;
  double vf_threshold = 1e-8;
};

// Unknown keys are rejected; every present key is validated.
AnalysisConfig config_from_json(const std::string& text);
nlohmann::ordered_json config_to_json(const AnalysisConfig& c);

struct Report {
  nlohmann::ordered_json json;
  std::map<std::string, std::string> csv;  // series name -> tau,value,stderr
  int exit_code = 0;
  bool has_verdict = false;
  VerdictStatus status = VerdictStatus::Inconclusive;

  std::string text() const { return json.dump(2) + "\n"; }
};

Report analyze(const PolynomialMap& phi, const AnalysisConfig& cfg);
Report run_knapp(const PolynomialMap& phi, const AnalysisConfig& cfg);
Report run_testing(const PolynomialMap& phi, const AnalysisConfig& cfg);
Report run_vfields(const PolynomialMap& phi, const AnalysisConfig& cfg);

int exit_code_for(VerdictStatus s);

}  // namespace curvnd
