#ifndef CURVND_H
#define CURVND_H

#include <stddef.h>
#include <stdint.h>

#if defined(CURVND_BUILDING)
#define CURVND_API __attribute__((visibility("default")))
#else
#define CURVND_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum curvnd_status {
  CURVND_OK = 0,
  CURVND_E_INVALID_ARGUMENT = 1,
  CURVND_E_DIMENSION_MISMATCH,
  CURVND_E_DEPENDENT_INPUT,
  CURVND_E_CHAIN_VIOLATION,
  CURVND_E_SINGULAR_BASIS,
  CURVND_E_RANK_DEFICIENT,
  CURVND_E_NON_ORTHONORMAL_BASES,
  CURVND_E_TRACE_VIOLATION,
  CURVND_E_NOT_NONDEGENERATE,
  CURVND_E_BAD_DIMENSIONS,
  CURVND_E_PARSE,
  CURVND_E_EMPTY_GUARD,
  CURVND_E_ZERO_MEASURE,
  CURVND_E_INSUFFICIENT_SAMPLES,
  CURVND_E_NON_UNIT_DETERMINANT,
  CURVND_E_BUDGET_EXHAUSTED,
  CURVND_E_IO,
  CURVND_E_INTERNAL = 99
} curvnd_status;

typedef enum curvnd_verdict {
  CURVND_VERDICT_NONE = -1,
  CURVND_VERDICT_NONDEGENERATE = 0,
  CURVND_VERDICT_DEGENERATE = 1,
  CURVND_VERDICT_INCONCLUSIVE = 2
} curvnd_verdict;

typedef struct curvnd_map curvnd_map;
typedef struct curvnd_report curvnd_report;

CURVND_API const char* curvnd_version(void);

/* Message for the last failed call on this thread, or "" */
CURVND_API const char* curvnd_last_error(void);

/* Parses the text format, or JSON when the input starts with '{'. */
CURVND_API curvnd_status curvnd_map_from_text(const char* text, curvnd_map** out);
CURVND_API curvnd_status curvnd_map_from_json(const char* json, curvnd_map** out);
CURVND_API curvnd_status curvnd_map_to_text(const curvnd_map* map, char** out);
CURVND_API curvnd_status curvnd_map_to_json(const curvnd_map* map, char** out);
CURVND_API curvnd_status curvnd_map_dims(const curvnd_map* map, int* n, int* d1);
CURVND_API void curvnd_map_free(curvnd_map* map);

/* config_json may be NULL or "" for defaults. */
CURVND_API curvnd_status curvnd_analyze(const curvnd_map* map, const char* config_json, curvnd_report** out);
CURVND_API curvnd_status curvnd_run_knapp(const curvnd_map* map, const char* config_json, curvnd_report** out);
CURVND_API curvnd_status curvnd_run_testing(const curvnd_map* map, const char* config_json, curvnd_report** out);
CURVND_API curvnd_status curvnd_run_vfields(const curvnd_map* map, const char* config_json, curvnd_report** out);

/* Returned strings are owned by the report. */
CURVND_API const char* curvnd_report_json(const curvnd_report* report);
/* NULL when the report has no such table ("knapp" or "testing"). */
CURVND_API const char* curvnd_report_csv(const curvnd_report* report, const char* name);
CURVND_API curvnd_verdict curvnd_report_verdict(const curvnd_report* report);
CURVND_API int curvnd_report_exit_code(const curvnd_report* report);
CURVND_API void curvnd_report_free(curvnd_report* report);

CURVND_API void curvnd_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
