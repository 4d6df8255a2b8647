/* Candidate ABI, version 1.
 *
 * Every candidate is one C11 translation unit that includes this header and
 * exports one int32_t entry(ks_descriptor *) symbol per task kernel.  The
 * descriptor layout below is the frozen byte contract between the harness
 * and compiled plugins; bump KS_ABI_VERSION on any change.
 *
 * Field order and widths (no implicit padding; total size 256 bytes):
 *   offset   0  uint64 seed          run seed for counter-based generators
 *   offset   8  uint64 buf_len[8]    element counts (pairs for complex data)
 *   offset  72  void*  buf[8]        buffer base addresses
 *   offset 136  float  consts[16]    task constants, frozen per-task order
 *   offset 200  uint32 params[8]     size parameters, frozen per-task order
 *   offset 232  uint32 abi_version
 *   offset 236  uint32 n_buffers
 *   offset 240  uint32 n_params
 *   offset 244  uint32 n_consts
 *   offset 248  uint32 steps         step/sweep/pass count for one repetition
 *   offset 252  uint32 step_index    set by the harness for multi-entry tasks
 *
 * Single-entry tasks are called once per timed repetition and run all
 * `steps` internally.  Multi-entry tasks (lj, gradshaf, fft3d) are sequenced
 * by the harness: entries run in declared order each step with step_index
 * set, and the harness ping-pongs buf[0]/buf[1] where the task contract says
 * so.  Candidates must not perform I/O and must not allocate beyond the
 * stack.
 */
#ifndef KS_ABI_H
#define KS_ABI_H

#include <stdint.h>

#define KS_ABI_VERSION 1u
#define KS_MAX_BUFFERS 8
#define KS_MAX_PARAMS 8
#define KS_MAX_CONSTS 16

typedef struct {
    uint64_t seed;
    uint64_t buf_len[KS_MAX_BUFFERS];
    void    *buf[KS_MAX_BUFFERS];
    float    consts[KS_MAX_CONSTS];
    uint32_t params[KS_MAX_PARAMS];
    uint32_t abi_version;
    uint32_t n_buffers;
    uint32_t n_params;
    uint32_t n_consts;
    uint32_t steps;
    uint32_t step_index;
} ks_descriptor;

/* Exported from every plugin so the harness can refuse a layout mismatch.
 * Defined here (not static) on purpose: each candidate is a single
 * translation unit, and including this header is what exports the symbol. */
uint32_t ks_abi_version(void) { return KS_ABI_VERSION; }

#endif /* KS_ABI_H */
