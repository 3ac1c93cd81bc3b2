/* C interface to the chernoff-lab core. Handles are opaque; every function
 * returns a status code from chlab_status and leaves a human-readable
 * message for the calling thread in chlab_last_error(). */

#ifndef CHERNOFF_LAB_H
#define CHERNOFF_LAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum chlab_status {
  CHLAB_OK = 0,
  CHLAB_ERR_VALIDATION = 1, /* bad config / parse / argument */
  CHLAB_ERR_RUNTIME = 2,    /* numerical or I/O failure */
  CHLAB_ERR_BOUND_VIOLATION = 3,
} chlab_status;

typedef struct chlab_config chlab_config;
typedef struct chlab_report chlab_report;

/* Message describing the most recent failure on this thread. */
const char* chlab_last_error(void);

const char* chlab_version(void);

/* ---- scenarios ---- */
int chlab_scenario_count(void);
const char* chlab_scenario_name(int index);
const char* chlab_scenario_description(int index);

/* ---- configuration ---- */
chlab_status chlab_config_load(const char* path, chlab_config** out);
chlab_status chlab_config_parse(const char* json_text, chlab_config** out);
void chlab_config_free(chlab_config* config);
const char* chlab_config_scenario(const chlab_config* config);
const char* chlab_config_output_path(const chlab_config* config);

/* ---- running ---- */

/* workers = 0 picks the hardware default (CHERNOFF_LAB_WORKERS respected). */
chlab_status chlab_run_scenario(const chlab_config* config, int workers,
                                chlab_report** out);

/* Runs the bound sweeps directly; returns CHLAB_ERR_BOUND_VIOLATION if any
 * sampled inequality fails. */
chlab_status chlab_check_bounds(uint64_t seed, int trials, int workers,
                                chlab_report** out);

/* ---- reports ---- */
void chlab_report_free(chlab_report* report);
size_t chlab_report_row_count(const chlab_report* report);
int chlab_report_any_bound_violation(const chlab_report* report);
int chlab_report_any_row_failed(const chlab_report* report);

typedef struct chlab_row {
  long n;
  double t_n;
  double norm_error;
  double per_vector_max_error;
  double bound_value; /* NaN when not applicable */
  double wall_time_s;
  int failed;
} chlab_row;

chlab_status chlab_report_row(const chlab_report* report, size_t index,
                              chlab_row* out);

chlab_status chlab_report_write_csv(const chlab_report* report,
                                    const char* path);

/* Caller frees with chlab_string_free. */
chlab_status chlab_report_render_csv(const chlab_report* report, char** out);
void chlab_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* CHERNOFF_LAB_H */
