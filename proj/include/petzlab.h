// Copyright 2026 The petzlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PETZLAB_H_
#define PETZLAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(PETZLAB_BUILDING)
#define PETZLAB_API __attribute__((visibility("default")))
#else
#define PETZLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum petz_status {
  PETZ_OK = 0,
  PETZ_VIOLATION = 1,
  PETZ_CONFIG_ERROR = 2,
  PETZ_NUMERICAL_ERROR = 3,
  PETZ_INVALID_ARGUMENT = 4,
  PETZ_INTERNAL_ERROR = 5
} petz_status;

typedef struct petz_channel petz_channel;
typedef struct petz_reference petz_reference;
typedef struct petz_state petz_state;
typedef struct petz_analysis petz_analysis;

/* Matrices cross the boundary as interleaved (re, im) doubles in row-major
   order, so an r x c matrix occupies 2*r*c doubles. */

PETZLAB_API const char* petz_version(void);

/* Message of the last failed call on this thread, or "" if none. */
PETZLAB_API const char* petz_last_error(void);

/* Frees strings returned through char** out-parameters. */
PETZLAB_API void petz_string_free(char* s);

/* Channels. */
PETZLAB_API petz_status petz_channel_from_json(const char* json, int source_dim, petz_channel** out);
PETZLAB_API petz_status petz_channel_from_kraus(const double* ops, int count, int source_dim,
                                                int target_dim, petz_channel** out);
PETZLAB_API void petz_channel_destroy(petz_channel* channel);
PETZLAB_API int petz_channel_source_dim(const petz_channel* channel);
PETZLAB_API int petz_channel_target_dim(const petz_channel* channel);
/* flags: bit 0 cp, bit 1 tp, bit 2 unital, bit 3 strict. */
PETZLAB_API petz_status petz_channel_checks(const petz_channel* channel, int* flags);
PETZLAB_API petz_status petz_channel_apply(const petz_channel* channel, const double* x, double* y);
/* Superoperator matrix, target_dim^2 x source_dim^2. */
PETZLAB_API petz_status petz_channel_matrix(const petz_channel* channel, double* out);

/* References and states on M_dim, normalized so that tau = Tr/dim is 1. */
PETZLAB_API petz_status petz_reference_create(const double* matrix, int dim, petz_reference** out);
PETZLAB_API petz_status petz_reference_random(int dim, uint64_t seed, double cond_cap,
                                              petz_reference** out);
PETZLAB_API void petz_reference_destroy(petz_reference* reference);

PETZLAB_API petz_status petz_state_create(const double* matrix, int dim, petz_state** out);
PETZLAB_API petz_status petz_state_random(int dim, uint64_t seed, petz_state** out);
PETZLAB_API void petz_state_destroy(petz_state* state);
PETZLAB_API petz_status petz_state_matrix(const petz_state* state, double* out);

/* Recovery map and fixed-point analysis. */
PETZLAB_API petz_status petz_map(const petz_channel* channel, const petz_reference* reference,
                                 petz_channel** out);
PETZLAB_API petz_status petz_analyze(const petz_channel* channel, const petz_reference* reference,
                                     double eps_fix, petz_analysis** out);
PETZLAB_API void petz_analysis_destroy(petz_analysis* analysis);
PETZLAB_API double petz_analysis_delta(const petz_analysis* analysis);
PETZLAB_API int petz_analysis_fixed_dim(const petz_analysis* analysis);
PETZLAB_API petz_status petz_analysis_psi(const petz_analysis* analysis, petz_channel** out);
PETZLAB_API petz_status petz_analysis_deviation_norm(const petz_analysis* analysis, int n,
                                                     double* out);
PETZLAB_API petz_status petz_analysis_to_json(const petz_analysis* analysis, char** out);

/* Entropies. p may be INFINITY. */
PETZLAB_API petz_status petz_sandwiched_entropy(const petz_state* a, const petz_reference* b,
                                                double p, double* out);
PETZLAB_API petz_status petz_fidelity(const petz_state* a1, const petz_state* a2, double* out);
PETZLAB_API petz_status petz_dpi_gap(const petz_channel* channel, const petz_state* a,
                                     const petz_reference* b, double p, double* out);

/* Runs a CLI subcommand on a JSON config. The return value is the exit code
   (0 ok, 1 violation, 2 config error, 3 numerical error). *out receives the
   command output and *error a diagnostic; either may be NULL. */
PETZLAB_API int petz_run_command(const char* command, const char* config_json, int has_seed,
                                 uint64_t seed, char** out, char** error);

#ifdef __cplusplus
}
#endif

#endif  // PETZLAB_H_
