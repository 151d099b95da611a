#ifndef CHEMOKIN_CHEMOKIN_H
#define CHEMOKIN_CHEMOKIN_H

/* C interface of libchemokin. Functions return a ck_status; on failure the
 * message is available from ck_last_error() on the same thread. */

#include <stddef.h>
#include <stdint.h>

#if defined(CHEMOKIN_BUILDING_LIBRARY)
#define CK_API __attribute__((visibility("default")))
#else
#define CK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ck_status {
  CK_OK = 0,
  CK_ERR_INVALID_ARGUMENT = 1,
  CK_ERR_DOMAIN = 2,
  CK_ERR_CONFIG = 3,
  CK_ERR_SINGULAR = 4,
  CK_ERR_ENDPOINT = 5,
  CK_ERR_INTEGRABILITY = 6,
  CK_ERR_TIMEOUT = 7,
  CK_ERR_IO = 8,
  CK_ERR_INTERNAL = 9,
  /* ck_run with strict set: the run finished but a threshold check failed. */
  CK_THRESHOLD_VIOLATION = 100
} ck_status;

/* Units: um, s, uM. */
typedef struct ck_params {
  double v0, kR, a0, alpha0, z0, tau0, H;
  int N;
  double KI, KA, S0, m0;
} ck_params;

typedef enum ck_regime {
  CK_REGIME_UNBIASED = 0,
  CK_REGIME_CASE2_KELLER_SEGEL = 1,
  CK_REGIME_CASE2_HYPERBOLIC = 2,
  CK_REGIME_CASE1_SUBCRITICAL = 3,
  CK_REGIME_CASE1_SUPERCRITICAL = 4
} ck_regime;

typedef struct ck_closure_summary {
  double g, a1, a2;
  double c0;          /* NaN for G = 0 */
  double theta_left;  /* NaN for G = 0 */
  double theta_right;
  double kappa;  /* um/s */
  double kappa3; /* um/s */
  double D0;     /* um^2/s */
  ck_regime regime;
} ck_closure_summary;

CK_API const char* ck_version(void);
CK_API const char* ck_last_error(void);

CK_API void ck_default_params(ck_params* out);
CK_API ck_status ck_gradient_number(const ck_params* p, double G, double* g, double* a1, double* a2);
CK_API ck_status ck_closure_summary_get(const ck_params* p, double G, ck_closure_summary* out);
/* Per-direction curves Q0+/-/(N alpha0 a(1-a)) at n activities. */
CK_API ck_status ck_closure_density(const ck_params* p, double G, const double* a, size_t n, double* plus,
                                    double* minus);

typedef struct ck_ensemble ck_ensemble;

/* Agents on the periodic domain [x_min, x_max) with gradient G. */
CK_API ck_status ck_ensemble_new(const ck_params* p, double G, double x_min, double x_max, size_t count, double dt,
                                 uint64_t seed, unsigned threads, ck_ensemble** out);
CK_API ck_status ck_ensemble_step(ck_ensemble* e, size_t steps);
/* v0 (N+ - N-) / (N+ + N-) in um/s. */
CK_API ck_status ck_ensemble_drift(const ck_ensemble* e, double* v_d);
CK_API ck_status ck_ensemble_time(const ck_ensemble* e, double* t);
CK_API void ck_ensemble_free(ck_ensemble* e);

typedef struct ck_run_options {
  const char* config_path; /* JSON file; or */
  const char* config_json; /* inline JSON text; both NULL means all defaults */
  const char* out_dir;     /* NULL: outputs.dir from the config */
  int has_seed;            /* nonzero: seed overrides numerics.seed */
  uint64_t seed;
  unsigned threads; /* 0: numerics.threads from the config */
  int strict;       /* nonzero: threshold violations return CK_THRESHOLD_VIOLATION */
} ck_run_options;

CK_API void ck_run_options_init(ck_run_options* opt);
/* command: closure, agents, kinetic, macro, velocity-sweep, convergence,
 * compare. Overrides the tier named in the config. */
CK_API ck_status ck_run(const char* command, const ck_run_options* opt);
/* JSON summary of the last ck_run on this thread (files, violations, notes). */
CK_API const char* ck_last_report(void);

#ifdef __cplusplus
}
#endif

#endif
