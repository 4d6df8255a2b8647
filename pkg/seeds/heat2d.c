/* heat2d seed: naive 5-point diffusion, fp32 state, double update arithmetic.
 * Ping-pongs buf[0]/buf[1] internally; the final field ends up in buf[0]. */
#include "ks_abi.h"
#include <string.h>

int32_t heat2d_run(ks_descriptor *d)
{
    float *a = (float *)d->buf[0];
    float *b = (float *)d->buf[1];
    uint32_t nx = d->params[0];
    uint32_t ny = d->params[1];
    double alpha = (double)d->consts[0];
    for (uint32_t s = 0; s < d->steps; ++s) {
        for (uint32_t j = 0; j < ny; ++j) {
            for (uint32_t i = 0; i < nx; ++i) {
                uint32_t idx = j * nx + i;
                if (j == 0 || j == ny - 1 || i == 0 || i == nx - 1) {
                    b[idx] = a[idx];
                    continue;
                }
                double c = (double)a[idx];
                double neigh = (double)a[idx - 1] + (double)a[idx + 1]
                             + (double)a[idx - nx] + (double)a[idx + nx];
                b[idx] = (float)(c + alpha * (neigh - 4.0 * c));
            }
        }
        float *t = a;
        a = b;
        b = t;
    }
    if (a != (float *)d->buf[0])
        memcpy(d->buf[0], a, (size_t)d->buf_len[0] * sizeof(float));
    return 0;
}
