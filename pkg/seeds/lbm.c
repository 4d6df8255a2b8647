/* lbm seed: D2Q9 pull-stream + BGK collision, one cell at a time, SoA fields.
 * Double arithmetic per cell, fp32 state; final fields land in buf[0]. */
#include "ks_abi.h"
#include <string.h>

static const int CX[9] = {0, 1, 0, -1, 0, 1, -1, -1, 1};
static const int CY[9] = {0, 0, 1, 0, -1, 1, 1, -1, -1};
static const double W[9] = {
    4.0 / 9.0,
    1.0 / 9.0, 1.0 / 9.0, 1.0 / 9.0, 1.0 / 9.0,
    1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0,
};

int32_t lbm_run(ks_descriptor *d)
{
    float *a = (float *)d->buf[0];
    float *b = (float *)d->buf[1];
    uint32_t nx = d->params[0];
    uint32_t ny = d->params[1];
    double inv_tau = 1.0 / (double)d->consts[0];
    uint64_t plane = (uint64_t)nx * ny;
    for (uint32_t s = 0; s < d->steps; ++s) {
        for (uint32_t j = 0; j < ny; ++j) {
            for (uint32_t i = 0; i < nx; ++i) {
                double fs[9];
                for (int k = 0; k < 9; ++k) {
                    int sj = ((int)j - CY[k] + (int)ny) % (int)ny;
                    int si = ((int)i - CX[k] + (int)nx) % (int)nx;
                    fs[k] = (double)a[(uint64_t)k * plane + (uint64_t)sj * (uint64_t)nx + (uint64_t)si];
                }
                double rho = fs[0] + fs[1] + fs[2] + fs[3] + fs[4] + fs[5] + fs[6] + fs[7] + fs[8];
                double ux = (fs[1] - fs[3] + fs[5] - fs[6] - fs[7] + fs[8]) / rho;
                double uy = (fs[2] - fs[4] + fs[5] + fs[6] - fs[7] - fs[8]) / rho;
                double usq = ux * ux + uy * uy;
                uint64_t idx = (uint64_t)j * nx + i;
                for (int k = 0; k < 9; ++k) {
                    double cu = CX[k] * ux + CY[k] * uy;
                    double feq = W[k] * rho * (1.0 + 3.0 * cu + 4.5 * cu * cu - 1.5 * usq);
                    b[(uint64_t)k * plane + idx] = (float)(fs[k] - inv_tau * (fs[k] - feq));
                }
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
