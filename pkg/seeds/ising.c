/* ising seed: checkerboard Metropolis with the frozen counter generator.
 * This implementation must be byte-identical to any other conforming one:
 * counter = site ^ (sweep * 0x9E3779B9) ^ (color * 0x85EBCA6B), fmix32,
 * u = (h + 0.5) / 2^32, flip iff u < min(1, exp(-2*beta*J*m)); beta and J
 * are the fp32 task constants widened to double. */
#include "ks_abi.h"
#include <math.h>

static uint32_t mix32(uint32_t h)
{
    h ^= h >> 16;
    h *= 0x85EBCA6Bu;
    h ^= h >> 13;
    h *= 0xC2B2AE35u;
    h ^= h >> 16;
    return h;
}

int32_t ising_run(ks_descriptor *d)
{
    int8_t *s = (int8_t *)d->buf[0];
    uint32_t nx = d->params[0];
    uint32_t ny = d->params[1];
    double beta = (double)d->consts[0];
    double coupling = (double)d->consts[1];
    if (nx % 2u != 0u || ny % 2u != 0u)
        return 2;
    double table[5]; /* indexed by (m + 4) / 2 for m = sigma * h */
    for (int t = 0; t < 5; ++t) {
        double m = (double)(2 * t - 4);
        double x = -2.0 * beta * coupling * m;
        table[t] = (x >= 0.0) ? 1.0 : exp(x);
    }
    for (uint32_t sweep = 0; sweep < d->steps; ++sweep) {
        for (uint32_t color = 0; color < 2u; ++color) {
            for (uint32_t y = 0; y < ny; ++y) {
                for (uint32_t x = 0; x < nx; ++x) {
                    if (((x + y) & 1u) != color)
                        continue;
                    int h = s[y * nx + ((x + nx - 1u) % nx)]
                          + s[y * nx + ((x + 1u) % nx)]
                          + s[((y + ny - 1u) % ny) * nx + x]
                          + s[((y + 1u) % ny) * nx + x];
                    int m = (int)s[y * nx + x] * h;
                    uint32_t counter = (y * nx + x)
                        ^ (sweep * 0x9E3779B9u)
                        ^ (color * 0x85EBCA6Bu);
                    double u = ((double)mix32(counter) + 0.5) * (1.0 / 4294967296.0);
                    if (u < table[(m + 4) / 2])
                        s[y * nx + x] = (int8_t)(-s[y * nx + x]);
                }
            }
        }
    }
    return 0;
}
