#ifndef JI_JI_H
#define JI_JI_H

#include <stddef.h>
#include <stdint.h>

#if defined(JI_BUILDING_LIBRARY)
#define JI_API __attribute__((visibility("default")))
#else
#define JI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 1..13 match the library's domain/numerical error codes. */
typedef enum ji_status {
  JI_OK = 0,
  JI_ERR_INVALID_INPUT = 1,
  JI_ERR_NON_PHYSICAL = 2,
  JI_ERR_THETA_ONE = 3,
  JI_ERR_POLE_HIT = 4,
  JI_ERR_DENOMINATOR_ZERO = 5,
  JI_ERR_CONVERGENCE = 6,
  JI_ERR_INTERLACING = 7,
  JI_ERR_GAMMA_IS_POLE = 8,
  JI_ERR_ROOT_NOT_BRACKETED = 9,
  JI_ERR_NEGATIVE_RESIDUE = 10,
  JI_ERR_TOO_FEW_POLES = 11,
  JI_ERR_BREAKDOWN = 12,
  JI_ERR_DEGENERATE = 13,
  JI_ERR_IO = 100,
  JI_ERR_PARSE = 101,
  JI_ERR_INTERNAL = 102
} ji_status;

typedef struct ji_matrix ji_matrix;
typedef struct ji_chain ji_chain;

/* Message of the last failure on the calling thread; empty after success. */
JI_API const char* ji_last_error(void);
JI_API const char* ji_status_name(ji_status status);
/* 0 ok, 1 I/O or parse, 2 domain precondition, 3 numerical failure. */
JI_API int ji_exit_code(ji_status status);
JI_API const char* ji_version(void);

/* Strings returned through char** outputs are owned by the caller. */
JI_API void ji_string_free(char* s);

JI_API ji_status ji_matrix_create(const double* diag, size_t n, const double* offdiag, ji_matrix** out);
JI_API void ji_matrix_free(ji_matrix* m);
JI_API size_t ji_matrix_size(const ji_matrix* m);
/* diag receives n values, offdiag n - 1. */
JI_API ji_status ji_matrix_get(const ji_matrix* m, double* diag, double* offdiag);

JI_API ji_status ji_chain_create(const double* masses, size_t n, const double* springs, ji_chain** out);
JI_API void ji_chain_free(ji_chain* c);
JI_API size_t ji_chain_size(const ji_chain* c);
/* masses receives n values, springs n + 1. */
JI_API ji_status ji_chain_get(const ji_chain* c, double* masses, double* springs);

JI_API ji_status ji_chain_to_jacobi(const ji_chain* c, ji_matrix** out);
JI_API ji_status ji_jacobi_to_chain(const ji_matrix* m, double m1, double k1, ji_chain** out);
JI_API ji_status ji_perturb(const ji_matrix* m, size_t site, double theta, double h, ji_matrix** out);
JI_API ji_status ji_gamma(double theta, double h, double* out);

/* Ascending eigenvalues; `values` holds ji_matrix_size(m) entries. */
JI_API ji_status ji_eigenvalues(const ji_matrix* m, double* values);
JI_API ji_status ji_weyl_m(const ji_matrix* m, double re, double im, double* out_re, double* out_im);
JI_API ji_status ji_green(const ji_matrix* m, size_t site, double re, double im, double* out_re,
                          double* out_im);

/* JSON pipelines. config_json may be NULL for defaults. */
JI_API ji_status ji_fixture_json(const char* kind, size_t n, uint64_t seed, char** chain_json);
JI_API ji_status ji_forward_json(const char* chain_json, size_t site, double theta, double h,
                                 const char* config_json, char** forward_json, char** two_spectra_json);
JI_API ji_status ji_inverse_json(const char* spectra_json, const char* config_json,
                                 char** candidates_json, char** report_json);
JI_API ji_status ji_check_json(const char* spectra_json, const char* config_json, char** report_json);
JI_API ji_status ji_sweep_csv(const char* chain_json, const char* grid_json, const char* config_json,
                              char** rows_csv, char** pairs_csv);

#ifdef __cplusplus
}
#endif

#endif
