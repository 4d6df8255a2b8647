/* hmc seed: one chain at a time, leapfrog in double, Metropolis accept.
 * Momentum and accept draws use the same counter-hash composition as the
 * harness generator, so the seed reproduces the reference chains. */
#include "ks_abi.h"
#include <math.h>

#define KS_HMC_MAX_DIM 64u
#define KS_STREAM_MOMENTUM 16u
#define KS_STREAM_ACCEPT 17u
#define KS_TWO_PI 6.283185307179586476925286766559

static uint32_t mix32(uint32_t h)
{
    h ^= h >> 16;
    h *= 0x85EBCA6Bu;
    h ^= h >> 13;
    h *= 0xC2B2AE35u;
    h ^= h >> 16;
    return h;
}

static uint32_t counter_hash(uint64_t seed, uint32_t stream, uint64_t idx)
{
    uint32_t lo = (uint32_t)(seed & 0xFFFFFFFFu);
    uint32_t hi = (uint32_t)(seed >> 32);
    uint32_t low = (uint32_t)(idx & 0xFFFFFFFFu);
    uint32_t high = (uint32_t)(idx >> 32);
    uint32_t h = mix32(low * 0x9E3779B9u ^ lo);
    return mix32(h ^ stream * 0x85EBCA6Bu ^ hi ^ high * 0xC2B2AE35u);
}

static double uniform01(uint64_t seed, uint32_t stream, uint64_t idx)
{
    return ((double)counter_hash(seed, stream, idx) + 0.5) * (1.0 / 4294967296.0);
}

static double normal01(uint64_t seed, uint32_t stream, uint64_t idx)
{
    double u1 = uniform01(seed, stream, 2u * idx);
    double u2 = uniform01(seed, stream, 2u * idx + 1u);
    return sqrt(-2.0 * log(u1)) * cos(KS_TWO_PI * u2);
}

static void matvec(const float *a, const double *q, double *out, uint32_t dim)
{
    for (uint32_t e = 0; e < dim; ++e) {
        double acc = 0.0;
        for (uint32_t i = 0; i < dim; ++i)
            acc += q[i] * (double)a[i * dim + e];
        out[e] = acc;
    }
}

int32_t hmc_run(ks_descriptor *d)
{
    const float *a = (const float *)d->buf[0];
    float *qbuf = (float *)d->buf[1];
    uint32_t dim = d->params[0];
    uint32_t chains = d->params[1];
    uint32_t l_steps = d->params[2];
    double eps = (double)d->consts[0];
    if (dim > KS_HMC_MAX_DIM || l_steps < 1u)
        return 2;
    double q[KS_HMC_MAX_DIM], p[KS_HMC_MAX_DIM], grad[KS_HMC_MAX_DIM];
    double qn[KS_HMC_MAX_DIM], pn[KS_HMC_MAX_DIM];
    for (uint32_t step = 0; step < d->steps; ++step) {
        for (uint32_t chain = 0; chain < chains; ++chain) {
            for (uint32_t i = 0; i < dim; ++i) {
                q[i] = (double)qbuf[chain * dim + i];
                uint64_t g = (uint64_t)step * chains * dim + (uint64_t)chain * dim + i;
                p[i] = normal01(d->seed, KS_STREAM_MOMENTUM, g);
            }
            /* H(q, p) */
            matvec(a, q, grad, dim);
            double u0 = 0.0, k0 = 0.0;
            for (uint32_t i = 0; i < dim; ++i) {
                u0 += q[i] * grad[i];
                k0 += p[i] * p[i];
            }
            double h0 = 0.5 * u0 + 0.5 * k0;
            /* leapfrog: half kick, L drifts with full kicks between, half kick */
            for (uint32_t i = 0; i < dim; ++i) {
                qn[i] = q[i];
                pn[i] = p[i] - 0.5 * eps * grad[i];
            }
            for (uint32_t l = 0; l < l_steps; ++l) {
                for (uint32_t i = 0; i < dim; ++i)
                    qn[i] += eps * pn[i];
                matvec(a, qn, grad, dim);
                if (l + 1 < l_steps)
                    for (uint32_t i = 0; i < dim; ++i)
                        pn[i] -= eps * grad[i];
            }
            for (uint32_t i = 0; i < dim; ++i)
                pn[i] -= 0.5 * eps * grad[i];
            double u1 = 0.0, k1 = 0.0;
            matvec(a, qn, grad, dim);
            for (uint32_t i = 0; i < dim; ++i) {
                u1 += qn[i] * grad[i];
                k1 += pn[i] * pn[i];
            }
            double h1 = 0.5 * u1 + 0.5 * k1;
            double u = uniform01(d->seed, KS_STREAM_ACCEPT, (uint64_t)step * chains + chain);
            if (log(u) < -(h1 - h0))
                for (uint32_t i = 0; i < dim; ++i)
                    qbuf[chain * dim + i] = (float)qn[i];
        }
    }
    return 0;
}
