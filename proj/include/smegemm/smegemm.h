/*
 * Copyright 2026 The smegemm Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SMEGEMM_SMEGEMM_H_
#define SMEGEMM_SMEGEMM_H_

/* C interface to the simulated SME GEMM library. All objects are opaque;
 * every fallible call returns an smg_status and leaves a message for
 * smg_last_error() (per thread). */

#include <stddef.h>
#include <stdint.h>

#if defined(SMEGEMM_BUILDING)
#define SMG_API __attribute__((visibility("default")))
#else
#define SMG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum smg_status {
  SMG_OK = 0,
  SMG_ERR_USAGE = 1,    /* bad argument, unknown id, malformed file */
  SMG_ERR_FAULT = 2,    /* simulated memory fault */
  SMG_ERR_PLANNER = 3,  /* no tiling satisfies the constraints */
  SMG_ERR_INTERNAL = 4
} smg_status;

typedef enum smg_dtype { SMG_F32 = 0, SMG_F64 = 1, SMG_F16 = 2, SMG_I8 = 3 } smg_dtype;
typedef enum smg_layout { SMG_ROW_MAJOR = 0, SMG_COL_MAJOR = 1 } smg_layout;

typedef struct smg_context smg_context;
typedef struct smg_report smg_report;

typedef struct smg_options {
  smg_dtype dtype;
  smg_layout layout;
  double alpha;
  double beta;
  uint32_t units;         /* 0: profile unit_count */
  int blocking;           /* ablation switches, default 1 */
  int four_way_loads;
  int online_packing;
  int edge_kernel;
  uint64_t seed;          /* input initialisation */
  uint64_t queue_seed;    /* nonzero: shuffle the parallel task queue */
  double tolerance;       /* <0: precision default */
  uint64_t mc, nc, kc;    /* all nonzero: tiling override */
  const char* trace_path; /* instruction trace of unit 0, or NULL */
} smg_options;

SMG_API const char* smg_version(void);
SMG_API const char* smg_last_error(void);
SMG_API const char* smg_status_name(smg_status s);

SMG_API void smg_options_init(smg_options* opt);
SMG_API smg_status smg_parse_dtype(const char* name, smg_dtype* out);
SMG_API smg_status smg_parse_layout(const char* name, smg_layout* out);

/* Context: the simulated system (memory hierarchy, unit count, SVL). */
SMG_API smg_status smg_context_create(smg_context** out);
SMG_API void smg_context_destroy(smg_context* ctx);
SMG_API smg_status smg_context_load_profile(smg_context* ctx, const char* path);
SMG_API smg_status smg_context_parse_profile(smg_context* ctx, const char* text);
/* Profile in file syntax; valid until the next call on ctx. */
SMG_API const char* smg_context_profile_text(smg_context* ctx);

/* Runs. Each returns a report set in *out (caller destroys). */
SMG_API smg_status smg_run_shape(smg_context* ctx, const smg_options* opt, uint64_t m, uint64_t n,
                                 uint64_t k, smg_report** out);
/* table_path NULL: built-in table. id NULL: every workload. */
SMG_API smg_status smg_run_workloads(smg_context* ctx, const smg_options* opt,
                                     const char* table_path, const char* id, uint64_t scale,
                                     smg_report** out);
SMG_API smg_status smg_run_irregular(smg_context* ctx, const smg_options* opt, uint64_t k,
                                     smg_report** out);
SMG_API smg_status smg_run_ablation(smg_context* ctx, const smg_options* opt,
                                    const char* table_path, const char* id, uint64_t scale,
                                    smg_report** out);

/* C = alpha*A*B + beta*C on caller arrays (element types per dtype: float,
 * double, uint16 half bits, int8; C is float/double/float/int32).
 * Leading dimensions in elements, in opt->layout. *out may be NULL. */
SMG_API smg_status smg_gemm(smg_context* ctx, const smg_options* opt, uint64_t m, uint64_t n,
                            uint64_t k, const void* a, uint64_t lda, const void* b, uint64_t ldb,
                            void* c, uint64_t ldc, smg_report** out);

/* Planner. tiling[5] = mc, nc, kc, mr, nr (row-major orientation). */
SMG_API smg_status smg_plan(smg_context* ctx, smg_dtype dtype, uint64_t m, uint64_t n, uint64_t k,
                            uint64_t tiling[5]);
/* Constraint report for a tiling; text valid until the next call on ctx. */
SMG_API smg_status smg_explain(smg_context* ctx, smg_dtype dtype, const uint64_t tiling[5],
                               const char** text);

/* Report sets. */
SMG_API size_t smg_report_count(const smg_report* r);
SMG_API int smg_report_all_passed(const smg_report* r);
/* JSON array, one object per run; owned by the report. */
SMG_API const char* smg_report_json(smg_report* r);
SMG_API const char* smg_report_table(smg_report* r);
/* Numeric field of run `index`, by dotted path ("mem.l2_misses",
 * "instr.edge_kernel_calls", "tiling.kc", "verdict.max_rel_err"...). */
SMG_API smg_status smg_report_value(const smg_report* r, size_t index, const char* path,
                                    double* out);
SMG_API void smg_report_destroy(smg_report* r);

#ifdef __cplusplus
}
#endif

#endif /* SMEGEMM_SMEGEMM_H_ */
