/* wave3d seed: naive 7-point leapfrog, rotating three fp32 grids.
 * On return buf[0] holds the second-to-last level and buf[1] the last. */
#include "ks_abi.h"
#include <string.h>

int32_t wave3d_run(ks_descriptor *d)
{
    float *b0 = (float *)d->buf[0];
    float *b1 = (float *)d->buf[1];
    float *prev = b0;
    float *cur = b1;
    float *next = (float *)d->buf[2];
    uint32_t nx = d->params[0];
    uint32_t ny = d->params[1];
    uint32_t nz = d->params[2];
    double alpha = (double)d->consts[0];
    uint64_t plane = (uint64_t)nx * ny;
    for (uint32_t s = 0; s < d->steps; ++s) {
        for (uint32_t k = 0; k < nz; ++k) {
            for (uint32_t j = 0; j < ny; ++j) {
                for (uint32_t i = 0; i < nx; ++i) {
                    uint64_t idx = (uint64_t)k * plane + (uint64_t)j * nx + i;
                    if (k == 0 || k == nz - 1 || j == 0 || j == ny - 1 || i == 0 || i == nx - 1) {
                        next[idx] = cur[idx];
                        continue;
                    }
                    double c = (double)cur[idx];
                    double neigh = (double)cur[idx - plane] + (double)cur[idx + plane]
                                 + (double)cur[idx - nx] + (double)cur[idx + nx]
                                 + (double)cur[idx - 1] + (double)cur[idx + 1];
                    next[idx] = (float)(2.0 * c - (double)prev[idx] + alpha * (neigh - 6.0 * c));
                }
            }
        }
        float *t = prev;
        prev = cur;
        cur = next;
        next = t;
    }
    /* rotate results back into the contract slots (prev -> buf0, cur -> buf1);
     * the pointer triple is always a cyclic rotation, so one of the two copy
     * orders below is overlap-safe */
    if (cur == b0) {
        memcpy(b1, cur, (size_t)d->buf_len[1] * sizeof(float));
        memcpy(b0, prev, (size_t)d->buf_len[0] * sizeof(float));
    } else {
        if (prev != b0)
            memcpy(b0, prev, (size_t)d->buf_len[0] * sizeof(float));
        if (cur != b1)
            memcpy(b1, cur, (size_t)d->buf_len[1] * sizeof(float));
    }
    return 0;
}
