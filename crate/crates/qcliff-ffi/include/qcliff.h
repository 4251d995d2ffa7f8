#ifndef QCLIFF_H
#define QCLIFF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum qc_dirac_kind {
  QC_DIRAC_KIND_D = 0,
  QC_DIRAC_KIND_DI = 1,
  QC_DIRAC_KIND_DJ = 2,
  QC_DIRAC_KIND_DK = 3,
  QC_DIRAC_KIND_DZ = 4,
  QC_DIRAC_KIND_DZ_DAG = 5,
  QC_DIRAC_KIND_DZ_J = 6,
  QC_DIRAC_KIND_DZ_J_DAG = 7,
} qc_dirac_kind;

typedef enum qc_format {
  QC_FORMAT_TEXT = 0,
  QC_FORMAT_JSON = 1,
  QC_FORMAT_LATEX = 2,
} qc_format;

typedef enum qc_status {
  QC_STATUS_OK = 0,
  QC_STATUS_NULL_POINTER = 1,
  QC_STATUS_INVALID_ARGUMENT = 2,
  QC_STATUS_PARSE = 3,
  QC_STATUS_DIMENSION_MISMATCH = 4,
  QC_STATUS_INDEX_OUT_OF_RANGE = 5,
  QC_STATUS_NOT_IN_SPAN = 6,
  QC_STATUS_NOT_SPIN = 7,
  QC_STATUS_ARITHMETIC = 8,
  QC_STATUS_PANIC = 9,
} qc_status;

typedef enum qc_system {
  QC_SYSTEM_EUCLIDEAN = 0,
  QC_SYSTEM_HERMITIAN = 1,
  QC_SYSTEM_QUATERNIONIC = 2,
} qc_system;

typedef enum qc_table {
  QC_TABLE_CELLS = 0,
  QC_TABLE_DIMS = 1,
  QC_TABLE_LIEALG_LEDGER = 2,
} qc_table;

/**
 * Opaque multivector in `C_{4p}`.
 */
typedef struct qc_multivector qc_multivector;

/**
 * Opaque Clifford-valued polynomial.
 */
typedef struct qc_polynomial qc_polynomial;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Owned by the library and
 * valid until the next failing call on the same thread.
 */
const char *qc_last_error(void);

void qc_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *qc_version(void);

enum qc_status qc_multivector_from_json(const char *json, struct qc_multivector **out);

enum qc_status qc_multivector_to_json(const struct qc_multivector *m, char **out);

void qc_multivector_free(struct qc_multivector *m);

/**
 * Clifford product `a b`.
 */
enum qc_status qc_multivector_product(const struct qc_multivector *a,
                                      const struct qc_multivector *b,
                                      struct qc_multivector **out);

enum qc_status qc_multivector_equal(const struct qc_multivector *a,
                                    const struct qc_multivector *b,
                                    bool *out);

/**
 * `f†_{a1} ... f†_{ar} I` for the subset with bit `k-1` set for each index `k`.
 */
enum qc_status qc_spinor_monomial(size_t p, uint32_t set, struct qc_multivector **out);

/**
 * Projection of a degree-`r` spinor onto the cell with index `s`.
 */
enum qc_status qc_project(size_t p,
                          size_t r,
                          size_t s,
                          const struct qc_multivector *x,
                          struct qc_multivector **out);

/**
 * Dimension of the cell in degree `r` with index `s`, from an exact basis.
 */
enum qc_status qc_cell_dim(size_t p, size_t r, size_t s, size_t *out);

enum qc_status qc_weyl_dim(size_t p, size_t r, size_t *out);

enum qc_status qc_polynomial_from_json(const char *json, struct qc_polynomial **out);

enum qc_status qc_polynomial_to_json(const struct qc_polynomial *f, char **out);

void qc_polynomial_free(struct qc_polynomial *f);

enum qc_status qc_apply_dirac(enum qc_dirac_kind op,
                              const struct qc_polynomial *f,
                              struct qc_polynomial **out);

/**
 * Monogenicity verdict. When `witness` is non-NULL it receives the first nonzero image
 * (or NULL when monogenic) and `witness_kind` the operator that produced it.
 */
enum qc_status qc_is_monogenic(const struct qc_polynomial *f,
                               enum qc_system sys,
                               bool *monogenic,
                               enum qc_dirac_kind *witness_kind,
                               struct qc_polynomial **witness);

/**
 * Runs the verification suite; `filter` may be NULL. The report is written as JSON.
 */
enum qc_status qc_run_suite(size_t p_max,
                            bool deep,
                            uint64_t seed,
                            const char *filter,
                            bool *all_passed,
                            char **report_json);

enum qc_status qc_emit_table(size_t p, enum qc_table what, enum qc_format format, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCLIFF_H */
