/* agewatch: software-aging detection toolkit, C interface.
 *
 * All functions returning aw_status set a thread-local message retrievable
 * through aw_last_error() when they fail. Constructors return NULL on
 * failure and set the same message. Handles are opaque and must be released
 * with their matching _free function.
 */
#ifndef AGEWATCH_H
#define AGEWATCH_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef AGEWATCH_API
#if defined(_WIN32)
#define AGEWATCH_API __declspec(dllimport)
#else
#define AGEWATCH_API
#endif
#endif

typedef enum aw_status {
  AW_OK = 0,
  AW_E_MISSING_COLUMN = 1,
  AW_E_NON_MONOTONIC_TIMESTAMPS = 2,
  AW_E_NON_FINITE_VALUE = 3,
  AW_E_EMPTY_FILE = 4,
  AW_E_NON_UNIFORM_INTERVAL = 5,
  AW_E_WARMUP_CONSUMES_EVERYTHING = 6,
  AW_E_SERIES_TOO_SHORT = 7,
  AW_E_INVALID_PERIOD = 8,
  AW_E_INVALID_SPAN = 9,
  AW_E_WINDOW_TOO_SHORT = 10,
  AW_E_SERIES_SHORTER_THAN_WINDOW = 11,
  AW_E_EMPTY_TRAINING_SET = 12,
  AW_E_FEATURE_WIDTH_MISMATCH = 13,
  AW_E_TOO_FEW_ROWS = 14,
  AW_E_LENGTH_MISMATCH = 15,
  AW_E_VALUE_OUT_OF_RANGE = 16,
  AW_E_INDEX_OUT_OF_RANGE = 17,
  AW_E_INVALID_SPEC = 18,
  AW_E_SOURCE_EXHAUSTED = 19,
  AW_E_IO = 20,
  AW_E_PARSE = 21,
  AW_E_INVALID_ARGUMENT = 22,
  AW_E_INTERNAL = 23
} aw_status;

AGEWATCH_API const char* aw_status_name(aw_status status);
AGEWATCH_API const char* aw_last_error(void);
AGEWATCH_API const char* aw_version(void);
AGEWATCH_API void aw_string_free(char* s);

/* ---------- streaming drift detectors ---------- */

typedef struct aw_ddm aw_ddm;

typedef enum aw_phase {
  AW_PHASE_IN_CONTROL = 0,
  AW_PHASE_WARNING = 1,
  AW_PHASE_DRIFT = 2
} aw_phase;

AGEWATCH_API aw_ddm* aw_ddm_new(int min_num_instances);
AGEWATCH_API aw_status aw_ddm_update(aw_ddm* d, int error, int* phase_out);
AGEWATCH_API aw_status aw_ddm_reset(aw_ddm* d);
AGEWATCH_API void aw_ddm_free(aw_ddm* d);

typedef struct aw_adwin aw_adwin;

AGEWATCH_API aw_adwin* aw_adwin_new(double delta, int max_buckets_per_level);
AGEWATCH_API aw_status aw_adwin_update(aw_adwin* a, double value, int* change_out);
AGEWATCH_API aw_status aw_adwin_width(const aw_adwin* a, uint64_t* out);
AGEWATCH_API aw_status aw_adwin_mean(const aw_adwin* a, double* out);
AGEWATCH_API aw_status aw_adwin_reset(aw_adwin* a);
AGEWATCH_API void aw_adwin_free(aw_adwin* a);

/* ---------- trained models ---------- */

typedef struct aw_model aw_model;

/* expected_width 0 skips the width check. */
AGEWATCH_API aw_model* aw_model_load(const char* path, size_t expected_width);
AGEWATCH_API aw_status aw_model_predict(const aw_model* m, const double* features,
                                        size_t width, int* prediction_out);
AGEWATCH_API void aw_model_free(aw_model* m);

/* ---------- file-level pipeline operations ---------- */

typedef struct aw_label_params {
  int period;        /* seasonal period in samples; must be >= 2 */
  int window_size;   /* trend-regression window, samples */
  int stride;
  double slope_threshold; /* memory units per sample */
  double warmup_seconds;
  int stl_seasonal_span;  /* cycles */
  int stl_trend_span;     /* samples; 0 derives from period */
  int stl_lowpass_span;   /* samples; 0 derives from period */
  int stl_inner_iterations;
  int stl_outer_iterations;
} aw_label_params;

AGEWATCH_API void aw_label_params_init(aw_label_params* p);
AGEWATCH_API aw_status aw_label_run(const aw_label_params* p, const char* input_csv,
                                    const char* labeled_csv_out,
                                    const char* components_csv_out /* nullable */);

typedef struct aw_train_params {
  int n_trees;
  int max_depth;
  int min_samples_leaf;
  int feature_window;
  int kfold_k;
  uint64_t seed;
} aw_train_params;

AGEWATCH_API void aw_train_params_init(aw_train_params* p);
AGEWATCH_API aw_status aw_train_run(const aw_train_params* p, const char* labeled_csv,
                                    const char* model_out,
                                    const char* report_json_out /* nullable */);

typedef struct aw_simulate_params {
  uint64_t seed;
  int has_seed; /* nonzero: override the spec file's seed */
} aw_simulate_params;

AGEWATCH_API void aw_simulate_params_init(aw_simulate_params* p);
AGEWATCH_API aw_status aw_simulate_run(const aw_simulate_params* p, const char* spec_file,
                                       const char* out_csv);

typedef struct aw_run_params {
  const char* mode; /* static | ddm | adwin */
  size_t retrain_window;
  int feature_window;
  int n_trees;
  int max_depth;
  int min_samples_leaf;
  int ddm_min_instances;
  double adwin_delta;
  int adwin_max_buckets;
  uint64_t seed;
} aw_run_params;

AGEWATCH_API void aw_run_params_init(aw_run_params* p);
AGEWATCH_API aw_status aw_run_prequential(const aw_run_params* p, const char* scenario_csv,
                                          const char* model_file,
                                          const char* report_json_out,
                                          const char* events_csv_out /* nullable */,
                                          const char* plot_csv_out /* nullable */,
                                          const char* svg_out /* nullable */);

typedef struct aw_matrix_params {
  uint64_t seed;
  int has_seed; /* nonzero: override the config file's seed */
} aw_matrix_params;

AGEWATCH_API void aw_matrix_params_init(aw_matrix_params* p);
/* config_file NULL runs the built-in scenario/mode matrix. */
AGEWATCH_API aw_status aw_run_matrix(const aw_matrix_params* p,
                                     const char* config_file /* nullable */,
                                     const char* out_dir);

/* ---------- report rendering ---------- */

/* Caller frees *out_text with aw_string_free. */
AGEWATCH_API aw_status aw_report_summary(const char* report_json_path, char** out_text);
AGEWATCH_API aw_status aw_report_chart(const char* plot_csv_path,
                                       const char* report_json_path /* nullable */,
                                       const char* out_svg);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* AGEWATCH_H */
