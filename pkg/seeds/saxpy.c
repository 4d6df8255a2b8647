/* saxpy seed: one scale-and-add pass, one element per loop step. */
#include "ks_abi.h"

int32_t saxpy_pass(ks_descriptor *d)
{
    const float *x = (const float *)d->buf[0];
    const float *y = (const float *)d->buf[1];
    float *out = (float *)d->buf[2];
    float a = d->consts[0];
    uint64_t n = d->buf_len[0];
    for (uint64_t i = 0; i < n; ++i)
        out[i] = a * x[i] + y[i];
    return 0;
}
