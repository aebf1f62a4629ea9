#ifndef MWDG_H
#define MWDG_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define MWDG_API __declspec(dllexport)
#else
#define MWDG_API __attribute__((visibility("default")))
#endif

/* Status codes returned by every fallible call. */
enum mwdg_status {
  MWDG_OK = 0,
  MWDG_ERR_INVALID_ARGUMENT = 1,
  MWDG_ERR_CONFIG = 2,
  MWDG_ERR_IO = 3,
  MWDG_ERR_UNSTABLE = 4,
  MWDG_ERR_UNSUPPORTED = 5,
  MWDG_ERR_INTERNAL = 6
};

typedef struct mwdg_config mwdg_config;
typedef struct mwdg_result mwdg_result;
typedef struct mwdg_solver mwdg_solver;

MWDG_API const char* mwdg_version(void);
/* Message of the last failure on the calling thread; empty if none. */
MWDG_API const char* mwdg_last_error(void);

MWDG_API int mwdg_config_create(mwdg_config** out);
MWDG_API int mwdg_config_load_file(mwdg_config* cfg, const char* path);
MWDG_API int mwdg_config_parse(mwdg_config* cfg, const char* text);
MWDG_API int mwdg_config_set(mwdg_config* cfg, const char* key, const char* value);
/* "key=value" */
MWDG_API int mwdg_config_override(mwdg_config* cfg, const char* assignment);
/* Copies the resolved configuration echo into buf; *needed receives the full length plus one. */
MWDG_API int mwdg_config_echo(const mwdg_config* cfg, char* buf, size_t size, size_t* needed);
MWDG_API void mwdg_config_destroy(mwdg_config* cfg);

/* out_dir may be NULL or empty to skip file output. */
MWDG_API int mwdg_run(const mwdg_config* cfg, const char* out_dir, mwdg_result** out);
MWDG_API int mwdg_sweep(const mwdg_config* cfg, const char* out_dir, mwdg_result** out);

/* Number of table rows (sweep) or record rows (run). */
MWDG_API size_t mwdg_result_rows(const mwdg_result* res);
/* Sweep rows: param = N or epsilon, rate = order or R_eps. Run rows: param = t, rate = energy. */
MWDG_API int mwdg_result_row(const mwdg_result* res, size_t i, double* param, size_t* dof, double* error,
                             double* rate);
MWDG_API double mwdg_result_l2_error(const mwdg_result* res);
MWDG_API double mwdg_result_linf_error(const mwdg_result* res);
MWDG_API size_t mwdg_result_dof(const mwdg_result* res);
MWDG_API double mwdg_result_solution_norm(const mwdg_result* res);
MWDG_API int mwdg_result_aborted(const mwdg_result* res);
/* CSV text of the table (sweep) or record (run). Owned by the result. */
MWDG_API const char* mwdg_result_csv(const mwdg_result* res);
MWDG_API void mwdg_result_destroy(mwdg_result* res);

MWDG_API int mwdg_solver_create(const mwdg_config* cfg, mwdg_solver** out);
MWDG_API int mwdg_solver_step(mwdg_solver* s, int n);
/* Steps to the given time, truncating the last step. */
MWDG_API int mwdg_solver_advance(mwdg_solver* s, double t);
MWDG_API double mwdg_solver_time(const mwdg_solver* s);
MWDG_API double mwdg_solver_dt(const mwdg_solver* s);
MWDG_API size_t mwdg_solver_dof(const mwdg_solver* s);
MWDG_API int mwdg_solver_energy(const mwdg_solver* s, double* out);
MWDG_API int mwdg_solver_l2_error(const mwdg_solver* s, double* out);
/* Copies the Alpert coefficients of u_h (which = 0) or w_h (which = 1). */
MWDG_API int mwdg_solver_coefficients(const mwdg_solver* s, int which, double* buf, size_t size, size_t* needed);
MWDG_API void mwdg_solver_destroy(mwdg_solver* s);

#ifdef __cplusplus
}
#endif

#endif
