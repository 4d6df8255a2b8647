/* nbody seed: all-pairs softened gravity, then kick-drift, one body at a time.
 * The j == i term contributes exactly zero through the softening. */
#include "ks_abi.h"
#include <math.h>

int32_t nbody_run(ks_descriptor *d)
{
    float *pos = (float *)d->buf[0];
    float *vel = (float *)d->buf[1];
    const float *mass = (const float *)d->buf[2];
    float *acc = (float *)d->buf[3];
    uint32_t n = d->params[0];
    double g = (double)d->consts[0];
    double eps = (double)d->consts[1];
    double dt = (double)d->consts[2];
    double eps2 = eps * eps;
    for (uint32_t s = 0; s < d->steps; ++s) {
        for (uint32_t i = 0; i < n; ++i) {
            double xi = (double)pos[3 * i];
            double yi = (double)pos[3 * i + 1];
            double zi = (double)pos[3 * i + 2];
            double ax = 0.0, ay = 0.0, az = 0.0;
            for (uint32_t j = 0; j < n; ++j) {
                double dx = (double)pos[3 * j] - xi;
                double dy = (double)pos[3 * j + 1] - yi;
                double dz = (double)pos[3 * j + 2] - zi;
                double r2 = dx * dx + dy * dy + dz * dz + eps2;
                double inv = 1.0 / (r2 * sqrt(r2));
                double w = (double)mass[j] * inv;
                ax += w * dx;
                ay += w * dy;
                az += w * dz;
            }
            acc[3 * i] = (float)(g * ax);
            acc[3 * i + 1] = (float)(g * ay);
            acc[3 * i + 2] = (float)(g * az);
        }
        for (uint32_t i = 0; i < 3 * n; ++i) {
            double v = (double)vel[i] + (double)acc[i] * dt;
            vel[i] = (float)v;
            pos[i] = (float)((double)pos[i] + v * dt);
        }
    }
    return 0;
}
