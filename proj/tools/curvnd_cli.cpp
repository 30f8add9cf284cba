#include "curvnd/curvnd.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string input;
  std::string config_file;
  std::string point;
  std::string out;
  bool quiet = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::string& path, const std::string& data) {
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << data;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t used = 0;
    double x = std::stod(item, &used);
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::runtime_error("bad number '" + item + "'");
    v.push_back(x);
  }
  return v;
}

// "x1,x2,...;t1,..."
json parse_point(const std::string& s) {
  auto semi = s.find(';');
  json p;
  p["x"] = parse_list(s.substr(0, semi));
  if (semi != std::string::npos) p["t"] = parse_list(s.substr(semi + 1));
  return p;
}

// Flags that map one-to-one onto config keys.
struct Setting {
  const char* flag;
  const char* key;
  const char* env;
  const char* help;
  bool is_int;
};

const Setting kNumeric[] = {
    {"--seed", "seed", "CURVND_SEED", "Random seed", true},
    {"--threads", "threads", "CURVND_THREADS", "Worker threads (0 = hardware)", true},
    {"--samples", "samples", "CURVND_SAMPLES", "Basis samples for the verdict search", true},
    {"--optimizer-iters", "optimizer_iters", "CURVND_OPTIMIZER_ITERS", "Evaluations per optimizer restart", true},
    {"--restarts", "restarts", "CURVND_RESTARTS", "Optimizer restarts", true},
    {"--certificate-size", "certificate_size", "CURVND_CERTIFICATE_SIZE", "Bases in the certificate", true},
    {"--tau-max", "tau_max", "CURVND_TAU_MAX", "Largest flow time for the decay check", false},
    {"--eps-coef", "eps_coef", "CURVND_EPS_COEF", "Zero threshold for coefficients", false},
    {"--margin-floor", "margin_floor", "CURVND_MARGIN_FLOOR", "Smallest accepted margin", false},
    {"--snap-threshold", "snap_threshold", "CURVND_SNAP_THRESHOLD", "Margin below which coefficients are snapped", false},
    {"--slope-floor", "slope_floor", "CURVND_SLOPE_FLOOR", "Smallest accepted decay slope", false},
    {"--hull-tol", "hull_tol", "CURVND_HULL_TOL", "Hull membership tolerance", false},
    {"--harness-samples", "harness_samples", "CURVND_HARNESS_SAMPLES", "Samples per flow time", true},
    {"--harness-tau-max", "harness_tau_max", "CURVND_HARNESS_TAU_MAX", "Largest integer flow time", true},
    {"--max-relative-se", "max_relative_se", "CURVND_MAX_RELATIVE_SE", "Largest accepted relative error", false},
    {"--testing-tau-max", "testing_tau_max", "CURVND_TESTING_TAU_MAX", "Largest integer scaling time", true},
    {"--cutoff-radius", "cutoff_radius", "CURVND_CUTOFF_RADIUS", "Cutoff radius", false},
    {"--quad-rel-tol", "quad_rel_tol", "CURVND_QUAD_REL_TOL", "Quadrature relative tolerance", false},
    {"--sup-basis-samples", "sup_basis_samples", "CURVND_SUP_BASIS_SAMPLES", "Directions in the sup search", true},
    {"--sup-x-samples", "sup_x_samples", "CURVND_SUP_X_SAMPLES", "Base points in the sup search", true},
    {"--generations", "generations", "CURVND_GENERATIONS", "Vector field generations", true},
    {"--probes", "probes", "CURVND_PROBES", "Probe points", true},
    {"--vf-threshold", "vf_threshold", "CURVND_VF_THRESHOLD", "Residual threshold", false},
};

struct Command {
  CLI::App* app;
  Options opt;
  std::vector<std::pair<const Setting*, std::string>> values;
  std::string method;
  std::string cutoff;
  bool harness = false, testing = false, vfields = false;
};

void add_common(Command& c) {
  c.app->add_option("-i,--input", c.opt.input, "Map file (text or JSON)")->required()->check(CLI::ExistingFile);
  c.app->add_option("-c,--config", c.opt.config_file, "JSON config file")->check(CLI::ExistingFile);
  c.app->add_option("-p,--point", c.opt.point, "Base point as x1,...;t1,...");
  c.app->add_option("-o,--out", c.opt.out, "Report path (stdout when omitted)");
  c.app->add_flag("-q,--quiet", c.opt.quiet, "No summary on stderr");
  c.values.reserve(std::size(kNumeric));
  for (const auto& s : kNumeric) {
    c.values.emplace_back(&s, std::string());
    c.app->add_option(s.flag, c.values.back().second, s.help)->envname(s.env);
  }
  c.app->add_option("--harness-method", c.method, "montecarlo or grid")
      ->check(CLI::IsMember({"montecarlo", "grid"}))
      ->envname("CURVND_HARNESS_METHOD");
  c.app->add_option("--cutoff", c.cutoff, "box, bump or zero")
      ->check(CLI::IsMember({"box", "bump", "zero"}))
      ->envname("CURVND_CUTOFF");
}

json build_config(const Command& c) {
  json cfg = json::object();
  if (!c.opt.config_file.empty()) {
    cfg = json::parse(read_file(c.opt.config_file));
    if (!cfg.is_object()) throw std::runtime_error("config file must hold a JSON object");
  }
  for (const auto& [s, v] : c.values) {
    if (v.empty()) continue;
    std::size_t used = 0;
    if (s->is_int) {
      long long x = std::stoll(v, &used);
      if (used != v.size()) throw std::runtime_error(std::string(s->flag) + ": not an integer");
      cfg[s->key] = x;
    } else {
      double x = std::stod(v, &used);
      if (used != v.size()) throw std::runtime_error(std::string(s->flag) + ": not a number");
      cfg[s->key] = x;
    }
  }
  if (!c.method.empty()) cfg["harness_method"] = c.method;
  if (!c.cutoff.empty()) cfg["cutoff"] = c.cutoff;
  if (!c.opt.point.empty()) cfg["point"] = parse_point(c.opt.point);
  if (c.harness) cfg["harness"] = true;
  if (c.testing) cfg["testing"] = true;
  if (c.vfields) cfg["vfields"] = true;
  return cfg;
}

const char* verdict_text(curvnd_verdict v) {
  switch (v) {
    case CURVND_VERDICT_NONDEGENERATE:
      return "nondegenerate";
    case CURVND_VERDICT_DEGENERATE:
      return "degenerate";
    case CURVND_VERDICT_INCONCLUSIVE:
      return "inconclusive";
    default:
      return "-";
  }
}

int execute(const std::string& name, const Command& c) {
  json cfg = build_config(c);
  std::string text = read_file(c.opt.input);
  curvnd_map* map = nullptr;
  if (curvnd_map_from_text(text.c_str(), &map) != CURVND_OK) {
    std::cerr << "error: " << curvnd_last_error() << "\n";
    return 1;
  }
  std::unique_ptr<curvnd_map, void (*)(curvnd_map*)> map_guard(map, curvnd_map_free);
  std::string cfg_text = cfg.dump();
  curvnd_report* rep = nullptr;
  curvnd_status st = CURVND_OK;
  if (name == "analyze")
    st = curvnd_analyze(map, cfg_text.c_str(), &rep);
  else if (name == "knapp")
    st = curvnd_run_knapp(map, cfg_text.c_str(), &rep);
  else if (name == "testing")
    st = curvnd_run_testing(map, cfg_text.c_str(), &rep);
  else
    st = curvnd_run_vfields(map, cfg_text.c_str(), &rep);
  if (st != CURVND_OK) {
    std::cerr << "error (" << static_cast<int>(st) << "): " << curvnd_last_error() << "\n";
    return 1;
  }
  std::unique_ptr<curvnd_report, void (*)(curvnd_report*)> rep_guard(rep, curvnd_report_free);
  if (c.opt.out.empty()) {
    std::cout << curvnd_report_json(rep);
  } else {
    write_atomic(c.opt.out, curvnd_report_json(rep));
    for (const char* table : {"knapp", "testing"})
      if (const char* csv = curvnd_report_csv(rep, table)) write_atomic(c.opt.out + "." + table + ".csv", csv);
  }
  int code = curvnd_report_exit_code(rep);
  if (!c.opt.quiet) std::cerr << name << ": " << verdict_text(curvnd_report_verdict(rep)) << " (exit " << code << ")\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature conditions for polynomial Radon-like maps"};
  app.set_version_flag("--version", std::string(curvnd_version()));
  app.require_subcommand(1);

  Command analyze{app.add_subcommand("analyze", "Verdict, exponents and optional harnesses")};
  add_common(analyze);
  analyze.app->add_flag("--with-harness", analyze.harness, "Run the incidence-ratio harness");
  analyze.app->add_flag("--with-testing", analyze.testing, "Run the testing-condition sweep");
  analyze.app->add_flag("--with-vfields", analyze.vfields, "Check vector field identities in t");

  Command knapp{app.add_subcommand("knapp", "Incidence ratios along a scaling flow")};
  add_common(knapp);
  Command testing{app.add_subcommand("testing", "Testing-condition sweep")};
  add_common(testing);
  Command vfields{app.add_subcommand("vfields", "Vector field identities for a map with no parameters")};
  add_common(vfields);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? 0 : 1;
  }

  try {
    for (Command* c : {&analyze, &knapp, &testing, &vfields})
      if (c->app->parsed()) return execute(c->app->get_name(), *c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
