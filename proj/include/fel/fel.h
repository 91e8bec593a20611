/* C API of the frame-energy toolkit: opaque handles, status codes, and the
 * configuration-driven experiment runner. All functions are thread-compatible
 * (distinct handles may be used from distinct threads); the last-error string
 * is thread-local. */

#ifndef FEL_H
#define FEL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fel_status {
  FEL_OK = 0,
  FEL_EINVAL = 1,      /* invalid argument / config */
  FEL_EDEGENERATE = 2, /* degenerate geometry (immersion floor, metric) */
  FEL_EGAUGE = 3,      /* conformal gauge restoration failed */
  FEL_ENUMERIC = 4,    /* numerical failure */
  FEL_EIO = 5,         /* file i/o */
  FEL_EUNRELIABLE = 6  /* diagnostic below confidence margin */
} fel_status;

typedef struct fel_grid fel_grid;
typedef struct fel_immersion fel_immersion;

/* Message for the most recent failing call on this thread. */
const char* fel_last_error(void);

/* Library strings returned through char** are released with this. */
void fel_string_free(char* s);

/* ---- moduli ------------------------------------------------------------ */

/* Reduces (tau1, tau2) to the moduli strip. word (optional) receives the
 * generator sequence applied. */
fel_status fel_moduli_reduce(double tau1, double tau2, double* out_tau1, double* out_tau2, char** word);

/* f(tau2, theta) = (tau2 + 1/tau2) sin^2(theta) / (sin^2(theta) + cos^4(theta)) */
fel_status fel_moduli_function(double tau2, double theta, double* out_f);

/* ---- grids and immersions ----------------------------------------------- */

fel_status fel_grid_create(int n1, int n2, double tau1, double tau2, fel_grid** out);
void fel_grid_destroy(fel_grid* g);

/* spec_json follows the runner schema, e.g. {"kind":"clifford"} or
 * {"kind":"rotational","R":1.4142135623730951,"r":1.0}. */
fel_status fel_immersion_create(const fel_grid* grid, const char* spec_json, fel_immersion** out);
void fel_immersion_destroy(fel_immersion* imm);

int fel_immersion_dim(const fel_immersion* imm);

/* Copies the samples (component planes concatenated, each row-major) into a
 * caller buffer of size n1*n2*dim. */
fel_status fel_immersion_samples(const fel_immersion* imm, double* buffer, size_t buffer_len);

/* ---- evaluations --------------------------------------------------------- */

typedef struct fel_energy_breakdown {
  double F;            /* 1/4 int |d e|^2 dvol, direct */
  double F_T;          /* tangential part */
  double W;            /* Willmore energy */
  double quarter_II2;  /* 1/4 int |II|^2 dvol */
  double gap;          /* |F - (F_T + quarter_II2)| */
} fel_energy_breakdown;

/* Frame energy of the Coulomb-projected coordinate frame. */
fel_status fel_frame_energy(const fel_immersion* imm, fel_energy_breakdown* out);

/* Lower-bound report as a JSON string (tau, theta, f, LB0 sides, Fenchel
 * minimum, branch, verdict). Applies gauge restoration if needed. */
fel_status fel_verify_lower_bound(const fel_immersion* imm, char** report_json);

typedef struct fel_class_label {
  int arf;           /* q(a) * q(b) in Z_2 */
  int q[2];          /* generator values */
  double margins[2]; /* rounding margins of the self-linking integers */
  char label[16];    /* "standard" | "nonstandard" */
} fel_class_label;

fel_status fel_classify(const fel_immersion* imm, fel_class_label* out);

/* ---- experiment runner ---------------------------------------------------
 * Runs a full experiment config (same schema as the CLI). Returns the CLI
 * exit semantics through out_code: 0 pass, 1 numerical failure, 2 config
 * error; the fel_status reflects call-level failures only. command may be ""
 * to accept whatever the config names. */
fel_status fel_run_config(const char* command, const char* config_json, const char* out_dir, int* out_code);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FEL_H */
