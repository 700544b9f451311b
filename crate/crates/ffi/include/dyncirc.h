/* SPDX-License-Identifier: Apache-2.0 */

#ifndef DYNCIRC_H
#define DYNCIRC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result codes. Zero is success.
typedef enum DcStatus {
  DC_STATUS_OK = 0,
  DC_STATUS_NULL_POINTER = 1,
  DC_STATUS_INVALID_UTF8 = 2,
  // Malformed JSON or wrong schema version.
  DC_STATUS_JSON = 3,
  // Indices out of range or wrong gate arity.
  DC_STATUS_INVALID_CIRCUIT = 4,
  DC_STATUS_EXPAND = 5,
  // Qubit cap exceeded or circuits of different shape.
  DC_STATUS_SIMULATION = 6,
  // Bad generator configuration.
  DC_STATUS_GENERATE = 7,
  // Internal error; the message has details.
  DC_STATUS_PANIC = 8,
} DcStatus;

// Opaque circuit handle.
typedef struct DcCircuit DcCircuit;

// Depth and gate count extremes over all execution paths.
typedef struct DcMetrics {
  size_t max_p_depth;
  size_t min_p_depth;
  size_t max_p_gate_count;
  size_t min_p_gate_count;
  // Saturates at `UINT64_MAX`.
  uint64_t path_count;
} DcMetrics;

// Benchmark generator settings. `pattern` is 1 (shallow blocks) or
// 2 (nested blocks of depth `d`).
typedef struct DcGenConfig {
  uint32_t pattern;
  size_t n;
  size_t d_s;
  size_t k;
  size_t d;
  uint64_t seed;
  double p_cx;
} DcGenConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *dc_version(void);

// Message for the last failed call on this thread, or NULL. The pointer is
// valid until the next `dc_` call on this thread.
const char *dc_last_error_message(void);

// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum DcStatus dc_circuit_from_json(const char *json, struct DcCircuit **out);

// Writes compact `dyncirc-v1` JSON to `*out`; free it with
// [`dc_string_free`].
//
// # Safety
// `c` must be a live handle or NULL; `out` must be writable.
enum DcStatus dc_circuit_to_json(const struct DcCircuit *c, char **out);

// # Safety
// `s` must come from this library or be NULL.
void dc_string_free(char *s);

// # Safety
// `c` must come from this library or be NULL, and not be used afterwards.
void dc_circuit_free(struct DcCircuit *c);

// Recursive branch expansion.
//
// # Safety
// `c` must be a live handle or NULL; `out` must be writable.
enum DcStatus dc_circuit_expand(const struct DcCircuit *c,
                                uint32_t depth_limit,
                                struct DcCircuit **out);

// Peephole cancellation with conditionals as barriers.
//
// # Safety
// `c` must be a live handle or NULL; `out` must be writable.
enum DcStatus dc_circuit_optimize(const struct DcCircuit *c, struct DcCircuit **out);

// Expansion followed by peephole cancellation.
//
// # Safety
// `c` must be a live handle or NULL; `out` must be writable.
enum DcStatus dc_circuit_pipeline(const struct DcCircuit *c,
                                  uint32_t depth_limit,
                                  struct DcCircuit **out);

// # Safety
// `c` must be a live handle or NULL; `out` must be writable.
enum DcStatus dc_circuit_metrics(const struct DcCircuit *c, struct DcMetrics *out);

// Compares the measurement-outcome ensembles of two circuits.
//
// # Safety
// `a` and `b` must be live handles or NULL; `out` must be writable.
enum DcStatus dc_circuit_equivalent(const struct DcCircuit *a,
                                    const struct DcCircuit *b,
                                    double tol,
                                    bool *out);

// # Safety
// `c` must be a live handle or NULL.
size_t dc_circuit_num_qubits(const struct DcCircuit *c);

// # Safety
// `c` must be a live handle or NULL.
size_t dc_circuit_num_clbits(const struct DcCircuit *c);

// Instruction count, counting the circuit declaration as one.
//
// # Safety
// `c` must be a live handle or NULL.
size_t dc_circuit_program_size(const struct DcCircuit *c);

// Defaults: pattern 1, n 3, d_s 5, k 1, d 1, seed 0, p_cx 0.3.
struct DcGenConfig dc_gen_config_default(void);

// # Safety
// `cfg` must point to a valid config or be NULL; `out` must be writable.
enum DcStatus dc_generate(const struct DcGenConfig *cfg, struct DcCircuit **out);

// The 9-qubit error-correction demo circuit.
//
// # Safety
// `out` must be writable.
enum DcStatus dc_qec_demo(struct DcCircuit **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DYNCIRC_H */
