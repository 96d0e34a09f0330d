// SPDX-License-Identifier: Apache-2.0
//
// irsim: cascaded-IRS terahertz uplink simulator and phase optimizer
// Copyright (C) 2026 The irsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/* C interface to irsim. Every function returning int yields an irs_status; on
   failure irs_last_error() holds a one-line diagnostic for the calling thread.
   Strings handed out by the library are released with irs_string_free. */

#ifndef IRSIM_C_H
#define IRSIM_C_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define IRS_API __declspec(dllexport)
#else
#define IRS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum irs_status
{
    IRS_OK = 0,
    IRS_ERR_DOMAIN = 1,
    IRS_ERR_SHAPE = 2,
    IRS_ERR_NUMERICAL = 3,
    IRS_ERR_NOT_PSD = 4,
    IRS_ERR_GEOMETRY = 5,
    IRS_ERR_BUDGET = 6,
    IRS_ERR_CONFIG_MISSING = 7,
    IRS_ERR_CONFIG_PARSE = 8,
    IRS_ERR_CONFIG_CONSTRAINT = 9,
    IRS_ERR_IO = 10,
    IRS_ERR_PRECONDITION = 11,
    IRS_ERR_NULL_ARGUMENT = 50,
    IRS_ERR_INTERNAL = 99
} irs_status;

typedef struct irs_config irs_config;
typedef struct irs_solution irs_solution;

typedef struct irs_complexity_input
{
    double m, n;   /* IRS element counts */
    double k;      /* users */
    double xi;     /* grid points per phase minus one */
    double s;      /* state size */
    double ui, uj; /* hidden widths */
    double hidden; /* hidden-to-hidden products */
    double a;      /* action size */
    double n_blk;  /* block size */
} irs_complexity_input;

typedef struct irs_complexity_output
{
    double drl;
    double pinv;
    double block;
    double exhaustive;
} irs_complexity_output;

IRS_API const char *irs_version(void);
IRS_API const char *irs_status_string(int status);
IRS_API const char *irs_last_error(void);
IRS_API void irs_string_free(char *s);

/* Configuration */
IRS_API int irs_config_default(irs_config **out);
IRS_API int irs_config_load(const char *path, irs_config **out);
IRS_API int irs_config_parse(const char *text, irs_config **out);
IRS_API int irs_config_set(irs_config *cfg, const char *key, const char *value);
IRS_API int irs_config_set_seed(irs_config *cfg, uint64_t seed);
IRS_API int irs_config_validate(const irs_config *cfg);
IRS_API int irs_config_serialize(const irs_config *cfg, char **out_text);
IRS_API void irs_config_free(irs_config *cfg);

/* Monte-Carlo sweep; CSV goes to `csv_path`, or to *out_text when csv_path is NULL. */
IRS_API int irs_run_sweep(const irs_config *cfg, const char *csv_path, char **out_text);

/* One DDPG training run. Either path may be NULL to skip that output. */
IRS_API int irs_train(const irs_config *cfg, const char *checkpoint_path, const char *reward_csv_path);

/* One realization (trial index `trial` of the sweep streams) solved by `solver`:
   pinv, block, grid, coord, random, or ddpg (needs `checkpoint_path`). */
IRS_API int irs_solve(const irs_config *cfg, const char *solver, uint64_t trial, const char *checkpoint_path,
                      irs_solution **out);
IRS_API size_t irs_solution_m(const irs_solution *sol);
IRS_API size_t irs_solution_n(const irs_solution *sol);
/* Copies min(len, M+N) phases [eta..., psi...]; returns the number copied. */
IRS_API size_t irs_solution_phases(const irs_solution *sol, double *buf, size_t len);
IRS_API int irs_solution_rates(const irs_solution *sol, double *rate1, double *rate2, double *sum_rate,
                               double *upper_bound, double *p_rx1_mw);
IRS_API void irs_solution_free(irs_solution *sol);

IRS_API void irs_complexity_defaults(irs_complexity_input *in);
IRS_API int irs_complexity(const irs_complexity_input *in, irs_complexity_output *out);
IRS_API int irs_complexity_table(const irs_complexity_input *in, char **out_text);

/* Runs the built-in invariant checks; *failures receives the failed-check count. */
IRS_API int irs_selftest(char **out_report, int *failures);

#ifdef __cplusplus
}
#endif

#endif
