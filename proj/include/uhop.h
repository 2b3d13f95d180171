/* C interface to the U-Hop two-stage memory retrieval library.
 *
 * All functions return a uhop_status; outputs are written through pointers.
 * Objects created by uhop_* constructors must be released with the matching
 * uhop_*_free call. uhop_last_error() describes the most recent failure on
 * the calling thread. Pattern data is column-major with one memory per
 * column; matrices are row-major where noted.
 */
#ifndef UHOP_H
#define UHOP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uhop_status {
  UHOP_OK = 0,
  UHOP_ERR_INVALID_ARGUMENT = 1,
  UHOP_ERR_DIMENSION = 2,
  UHOP_ERR_IO = 3,
  UHOP_ERR_FORMAT = 4,
  UHOP_ERR_DEGENERATE = 5,
  UHOP_ERR_ALPHA = 6,
  UHOP_ERR_INDEX = 7,
  UHOP_ERR_RANK = 8,
  UHOP_ERR_BISECTION = 9,
  UHOP_ERR_LINE_SEARCH = 10,
  UHOP_ERR_UNKNOWN = 99
} uhop_status;

typedef struct uhop_patterns uhop_patterns;
typedef struct uhop_feature_map uhop_feature_map;
typedef struct uhop_trace uhop_trace;

enum { UHOP_LOSS_AVERAGE = 0, UHOP_LOSS_MAXIMUM = 1, UHOP_LOSS_DL = 2 };
enum { UHOP_INIT_GAUSSIAN = 0, UHOP_INIT_IDENTITY = 1 };
enum { UHOP_ROWSCALE_UNIT = 0, UHOP_ROWSCALE_PRESERVE_NORM = 1 };
enum { UHOP_GEN_GAUSSIAN = 0, UHOP_GEN_ORTHOGONAL = 1, UHOP_GEN_NEAR_PARALLEL = 2 };
enum { UHOP_CORRUPT_MASK = 0, UHOP_CORRUPT_NOISE = 1 };
enum { UHOP_SIM_L2 = 0, UHOP_SIM_MANHATTAN = 1 };

typedef struct uhop_stage1_config {
  int64_t iters;        /* Stage-I gradient steps N */
  double step_size;     /* learning rate gamma */
  double t;             /* RBF sharpness */
  int line_search;      /* nonzero: backtracking halving, step never raises the loss */
  int loss_kind;        /* UHOP_LOSS_* */
  int weight_init;      /* UHOP_INIT_* */
  int64_t feature_dim;  /* 0 = default (4d gaussian, d identity) */
  int row_scaling;      /* UHOP_ROWSCALE_* */
} uhop_stage1_config;

typedef struct uhop_retrieval_config {
  double beta;
  double t;
  double alpha;       /* 1 softmax, 2 sparsemax, in between alpha-entmax */
  int64_t max_iters;  /* Stage-II steps T */
  double tol;         /* fixed-point residual tolerance */
} uhop_retrieval_config;

/* Fill a config with the defaults (N=0, gamma=1, t=2, line search on,
 * average loss, gaussian init / beta=1, t=2, alpha=1, T=1, tol=1e-10). */
void uhop_stage1_config_init(uhop_stage1_config* cfg);
void uhop_retrieval_config_init(uhop_retrieval_config* cfg);

const char* uhop_version(void);
/* Message for the last error raised on this thread; empty string if none. */
const char* uhop_last_error(void);

/* ---- pattern sets ---------------------------------------------------- */

uhop_status uhop_patterns_create(int64_t d, int64_t m, const double* colmajor,
                                 uhop_patterns** out);
uhop_status uhop_patterns_load_idx(const char* path, uhop_patterns** out);
uhop_status uhop_patterns_load_csv(const char* path, uhop_patterns** out);
uhop_status uhop_patterns_save_csv(const uhop_patterns* ps, const char* path);
/* kind: UHOP_GEN_*; angle (radians) only applies to near-parallel sets. */
uhop_status uhop_patterns_generate(int kind, int64_t d, int64_t m, double angle,
                                   uint64_t seed, uhop_patterns** out);
uhop_status uhop_patterns_select(const uhop_patterns* ps, const int64_t* indices,
                                 int64_t count, uhop_patterns** out);
uhop_status uhop_patterns_dims(const uhop_patterns* ps, int64_t* d, int64_t* m);
uhop_status uhop_patterns_copy(const uhop_patterns* ps, double* colmajor_out);
/* delta_out must hold M values. */
uhop_status uhop_patterns_stats(const uhop_patterns* ps, double* delta_out,
                                double* radius_out, double* max_norm_out);
void uhop_patterns_free(uhop_patterns* ps);

/* Corrupt a length-d query: UHOP_CORRUPT_MASK zeroes floor(amount*d)
 * coordinates, UHOP_CORRUPT_NOISE adds Gaussian noise rescaled to
 * amount * (largest memory norm). Deterministic per seed. */
uhop_status uhop_corrupt(const uhop_patterns* ps, const double* x, int kind, double amount,
                         uint64_t seed, double* out);

/* ---- feature maps ----------------------------------------------------- */

uhop_status uhop_feature_map_random(int64_t d, int64_t feature_dim, uint64_t seed,
                                    uhop_feature_map** out);
uhop_status uhop_feature_map_identity(int64_t d, int64_t feature_dim, uhop_feature_map** out);
uhop_status uhop_feature_map_load_csv(const char* path, uhop_feature_map** out);
uhop_status uhop_feature_map_save_csv(const uhop_feature_map* fm, const char* path);
uhop_status uhop_feature_map_dims(const uhop_feature_map* fm, int64_t* feature_dim, int64_t* d);
uhop_status uhop_feature_map_copy(const uhop_feature_map* fm, double* rowmajor_out);
uhop_status uhop_feature_map_normalize_rows(const uhop_feature_map* fm, uhop_feature_map** out);
uhop_status uhop_feature_map_lipschitz(const uhop_feature_map* fm, double* out);
void uhop_feature_map_free(uhop_feature_map* fm);

/* ---- stage I ----------------------------------------------------------- */

/* Seed weights per cfg, run N separation-descent steps, normalize rows.
 * loss_history_out (optional) must hold N+1 values. */
uhop_status uhop_stage1(const uhop_patterns* ps, const uhop_stage1_config* cfg, uint64_t seed,
                        double* loss_history_out, uhop_feature_map** model_out);
uhop_status uhop_separation_loss(const uhop_feature_map* fm, const uhop_patterns* ps, double t,
                                 int loss_kind, double* out);

/* ---- stage II / retrieval ---------------------------------------------- */

uhop_status uhop_energy(const uhop_feature_map* fm, const uhop_patterns* ps,
                        const uhop_retrieval_config* cfg, const double* x, double* out);
uhop_status uhop_retrieval_step(const uhop_feature_map* fm, const uhop_patterns* ps,
                                const uhop_retrieval_config* cfg, const double* x, double* out);
uhop_status uhop_retrieve(const uhop_feature_map* fm, const uhop_patterns* ps,
                          const uhop_retrieval_config* cfg, const double* x0, uhop_trace** out);

uhop_status uhop_trace_steps(const uhop_trace* tr, int64_t* out);      /* number of updates */
uhop_status uhop_trace_energy(const uhop_trace* tr, int64_t k, double* out);   /* k in [0, steps] */
uhop_status uhop_trace_residual(const uhop_trace* tr, int64_t k, double* out); /* k in [0, steps) */
uhop_status uhop_trace_converged(const uhop_trace* tr, int* out);
uhop_status uhop_trace_retrieved(const uhop_trace* tr, double* out);
void uhop_trace_free(uhop_trace* tr);

/* ---- two-stage drivers -------------------------------------------------- */

/* Full two-stage run for one query; any output pointer may be NULL. */
uhop_status uhop_two_stage(const uhop_patterns* ps, const uhop_stage1_config* s1,
                           const uhop_retrieval_config* cfg, const double* query,
                           const double* truth, uint64_t seed, double* sse_out,
                           double* final_loss_out, uhop_trace** trace_out);

/* Stage I once, then one corrupted query per memory. Arrays sized M;
 * converged_out/iters_out may be NULL. */
uhop_status uhop_batch_retrieve(const uhop_patterns* ps, const uhop_stage1_config* s1,
                                const uhop_retrieval_config* cfg, int corrupt_kind,
                                double corrupt_amount, uint64_t corrupt_seed, uint64_t seed,
                                double* sse_out, int* converged_out, int64_t* iters_out,
                                double* final_loss_out);

/* Distance-similarity comparison (negative l2 / l1 scores in place of the
 * kernel overlap), one corrupted query per memory. */
uhop_status uhop_baseline_batch_retrieve(const uhop_patterns* ps,
                                         const uhop_retrieval_config* cfg, int similarity,
                                         int corrupt_kind, double corrupt_amount,
                                         uint64_t corrupt_seed, double* sse_out);

/* ---- diagnostics ------------------------------------------------------- */

/* Per-memory exact-retrieval margins against -2t/(beta(alpha-1)).
 * margin_out and satisfied_out are sized M; either may be NULL. */
uhop_status uhop_check_exact_retrieval(const uhop_feature_map* fm, const uhop_patterns* ps,
                                       double alpha, double beta, double t, double* margin_out,
                                       int* satisfied_out, double* threshold_out);
uhop_status uhop_verify_fixed_point(const uhop_feature_map* fm, const uhop_patterns* ps,
                                    const uhop_retrieval_config* cfg, int64_t mu, int* out);
uhop_status uhop_min_distance_condition(const uhop_patterns* ps, double lipschitz, double alpha,
                                        double beta, int* out);
uhop_status uhop_error_bound(const uhop_patterns* ps, double beta, int64_t mu, double* out);

/* End-to-end attention-realization check over `trials` random targets with
 * orthogonalized features; writes the worst observed deviation. */
uhop_status uhop_verify_representation(int64_t m, int64_t d, int64_t trials, uint64_t seed,
                                       double* max_error_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* UHOP_H */
