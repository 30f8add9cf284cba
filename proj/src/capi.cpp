#include "curvnd/curvnd.h"

#include "analysis.hpp"
#include "error.hpp"
#include "radonmap.hpp"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>

struct curvnd_map {
  curvnd::PolynomialMap map;
};

struct curvnd_report {
  curvnd::Report report;
  std::string json;
};

namespace {

thread_local std::string g_last_error;

template <class F>
curvnd_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return CURVND_OK;
  } catch (const curvnd::Error& e) {
    g_last_error = e.what();
    return static_cast<curvnd_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CURVND_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CURVND_E_INTERNAL;
  }
}

curvnd_status bad_arg(const char* what) {
  g_last_error = what;
  return CURVND_E_INVALID_ARGUMENT;
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

using Runner = curvnd::Report (*)(const curvnd::PolynomialMap&, const curvnd::AnalysisConfig&);

curvnd_status run(Runner r, const curvnd_map* map, const char* config, curvnd_report** out) {
  if (!map || !out) return bad_arg("null argument");
  *out = nullptr;
  return guarded([&] {
    auto cfg = curvnd::config_from_json(config ? config : "");
    auto rep = std::make_unique<curvnd_report>();
    rep->report = r(map->map, cfg);
    rep->json = rep->report.text();
    *out = rep.release();
  });
}

}  // namespace

extern "C" {

const char* curvnd_version(void) { return "1.0.0"; }

const char* curvnd_last_error(void) { return g_last_error.c_str(); }

curvnd_status curvnd_map_from_text(const char* text, curvnd_map** out) {
  if (!text || !out) return bad_arg("null argument");
  *out = nullptr;
  return guarded([&] { *out = new curvnd_map{curvnd::parse_map(text)}; });
}

curvnd_status curvnd_map_from_json(const char* json, curvnd_map** out) {
  if (!json || !out) return bad_arg("null argument");
  *out = nullptr;
  return guarded([&] { *out = new curvnd_map{curvnd::parse_map_json(json)}; });
}

curvnd_status curvnd_map_to_text(const curvnd_map* map, char** out) {
  if (!map || !out) return bad_arg("null argument");
  return guarded([&] { *out = dup(curvnd::map_to_text(map->map)); });
}

curvnd_status curvnd_map_to_json(const curvnd_map* map, char** out) {
  if (!map || !out) return bad_arg("null argument");
  return guarded([&] { *out = dup(curvnd::map_to_json(map->map)); });
}

curvnd_status curvnd_map_dims(const curvnd_map* map, int* n, int* d1) {
  if (!map) return bad_arg("null argument");
  if (n) *n = map->map.n();
  if (d1) *d1 = map->map.d1();
  return CURVND_OK;
}

void curvnd_map_free(curvnd_map* map) { delete map; }

curvnd_status curvnd_analyze(const curvnd_map* map, const char* config_json, curvnd_report** out) {
  return run(&curvnd::analyze, map, config_json, out);
}

curvnd_status curvnd_run_knapp(const curvnd_map* map, const char* config_json, curvnd_report** out) {
  return run(&curvnd::run_knapp, map, config_json, out);
}

curvnd_status curvnd_run_testing(const curvnd_map* map, const char* config_json, curvnd_report** out) {
  return run(&curvnd::run_testing, map, config_json, out);
}

curvnd_status curvnd_run_vfields(const curvnd_map* map, const char* config_json, curvnd_report** out) {
  return run(&curvnd::run_vfields, map, config_json, out);
}

const char* curvnd_report_json(const curvnd_report* report) { return report ? report->json.c_str() : nullptr; }

const char* curvnd_report_csv(const curvnd_report* report, const char* name) {
  if (!report || !name) return nullptr;
  auto it = report->report.csv.find(name);
  return it == report->report.csv.end() ? nullptr : it->second.c_str();
}

curvnd_verdict curvnd_report_verdict(const curvnd_report* report) {
  if (!report || !report->report.has_verdict) return CURVND_VERDICT_NONE;
  switch (report->report.status) {
    case curvnd::VerdictStatus::Nondegenerate:
      return CURVND_VERDICT_NONDEGENERATE;
    case curvnd::VerdictStatus::Degenerate:
      return CURVND_VERDICT_DEGENERATE;
    case curvnd::VerdictStatus::Inconclusive:
      return CURVND_VERDICT_INCONCLUSIVE;
  }
  return CURVND_VERDICT_NONE;
}

int curvnd_report_exit_code(const curvnd_report* report) { return report ? report->report.exit_code : 1; }

void curvnd_report_free(curvnd_report* report) { delete report; }

void curvnd_string_free(char* s) { std::free(s); }

}  // extern "C"
