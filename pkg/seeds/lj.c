/* lj seed: cell-list Lennard-Jones MD in three phases per step.
 * clear_cells zeroes occupancy, build_cells scatters particles in index
 * order, step walks the 27 neighbor cells with minimum-image wrap and then
 * kick-drifts.  Forces accumulate in double and stage through buf[4]. */
#include "ks_abi.h"
#include <math.h>

int32_t lj_clear_cells(ks_descriptor *d)
{
    uint32_t *counts = (uint32_t *)d->buf[2];
    uint64_t n = d->buf_len[2];
    for (uint64_t c = 0; c < n; ++c)
        counts[c] = 0u;
    return 0;
}

static uint32_t cell_coord(float p, uint32_t m, double box)
{
    double c = floor((double)p * (double)m / box);
    if (c < 0.0)
        c = 0.0;
    if (c > (double)(m - 1u))
        c = (double)(m - 1u);
    return (uint32_t)c;
}

int32_t lj_build_cells(ks_descriptor *d)
{
    const float *pos = (const float *)d->buf[0];
    uint32_t *counts = (uint32_t *)d->buf[2];
    uint32_t *slots = (uint32_t *)d->buf[3];
    uint32_t n = d->params[0];
    uint32_t m = d->params[1];
    uint32_t cap = d->params[2];
    double box = (double)d->consts[0];
    for (uint32_t i = 0; i < n; ++i) {
        uint32_t cx = cell_coord(pos[3 * i], m, box);
        uint32_t cy = cell_coord(pos[3 * i + 1], m, box);
        uint32_t cz = cell_coord(pos[3 * i + 2], m, box);
        uint32_t cell = (cz * m + cy) * m + cx;
        uint32_t slot = counts[cell];
        if (slot >= cap)
            return 3; /* occupancy beyond capacity */
        slots[(uint64_t)cell * cap + slot] = i;
        counts[cell] = slot + 1u;
    }
    return 0;
}

int32_t lj_step(ks_descriptor *d)
{
    float *pos = (float *)d->buf[0];
    float *vel = (float *)d->buf[1];
    const uint32_t *counts = (const uint32_t *)d->buf[2];
    const uint32_t *slots = (const uint32_t *)d->buf[3];
    float *force = (float *)d->buf[4];
    uint32_t n = d->params[0];
    uint32_t m = d->params[1];
    uint32_t cap = d->params[2];
    double box = (double)d->consts[0];
    double dt = (double)d->consts[1];
    double rc = (double)d->consts[2];
    double rc2 = rc * rc;
    for (uint32_t i = 0; i < n; ++i) {
        double xi = (double)pos[3 * i];
        double yi = (double)pos[3 * i + 1];
        double zi = (double)pos[3 * i + 2];
        uint32_t cx = cell_coord(pos[3 * i], m, box);
        uint32_t cy = cell_coord(pos[3 * i + 1], m, box);
        uint32_t cz = cell_coord(pos[3 * i + 2], m, box);
        double fx = 0.0, fy = 0.0, fz = 0.0;
        for (int dz = -1; dz <= 1; ++dz) {
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    uint32_t ncx = (uint32_t)(((int)cx + dx + (int)m) % (int)m);
                    uint32_t ncy = (uint32_t)(((int)cy + dy + (int)m) % (int)m);
                    uint32_t ncz = (uint32_t)(((int)cz + dz + (int)m) % (int)m);
                    uint32_t cell = (ncz * m + ncy) * m + ncx;
                    uint32_t cnt = counts[cell];
                    for (uint32_t t = 0; t < cnt; ++t) {
                        uint32_t j = slots[(uint64_t)cell * cap + t];
                        if (j == i)
                            continue;
                        double ddx = (double)pos[3 * j] - xi;
                        double ddy = (double)pos[3 * j + 1] - yi;
                        double ddz = (double)pos[3 * j + 2] - zi;
                        ddx -= box * rint(ddx / box);
                        ddy -= box * rint(ddy / box);
                        ddz -= box * rint(ddz / box);
                        double r2 = ddx * ddx + ddy * ddy + ddz * ddz;
                        if (r2 >= rc2)
                            continue;
                        double inv2 = 1.0 / r2;
                        double inv6 = inv2 * inv2 * inv2;
                        double coef = -24.0 * (2.0 * inv6 * inv6 - inv6) * inv2;
                        fx += coef * ddx;
                        fy += coef * ddy;
                        fz += coef * ddz;
                    }
                }
            }
        }
        force[3 * i] = (float)fx;
        force[3 * i + 1] = (float)fy;
        force[3 * i + 2] = (float)fz;
    }
    for (uint32_t i = 0; i < 3 * n; ++i) {
        double v = (double)vel[i] + (double)force[i] * dt;
        double r = (double)pos[i] + v * dt;
        r -= box * floor(r / box);
        vel[i] = (float)v;
        pos[i] = (float)r;
    }
    return 0;
}
