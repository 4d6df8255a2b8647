/* gradshaf seed, two kernels per Picard step: interior max reduction into
 * buf[2][0], then the variable-coefficient 5-point update from buf[0] into
 * buf[1] (the harness swaps the two field buffers after each step). */
#include "ks_abi.h"

int32_t gs_axis_max(ks_descriptor *d)
{
    const float *psi = (const float *)d->buf[0];
    float *axis = (float *)d->buf[2];
    uint32_t nr = d->params[0];
    uint32_t nz = d->params[1];
    float best = psi[1u * nr + 1u];
    for (uint32_t j = 1; j + 1 < nz; ++j)
        for (uint32_t i = 1; i + 1 < nr; ++i) {
            float v = psi[j * nr + i];
            if (v > best)
                best = v;
        }
    axis[0] = best;
    return 0;
}

int32_t gs_relax(ks_descriptor *d)
{
    const float *psi = (const float *)d->buf[0];
    float *out = (float *)d->buf[1];
    const float *axis = (const float *)d->buf[2];
    uint32_t nr = d->params[0];
    uint32_t nz = d->params[1];
    double omega = (double)d->consts[0];
    double mu0 = (double)d->consts[1];
    double p_axis = (double)d->consts[2];
    double dr = (double)d->consts[3];
    double dz = (double)d->consts[4];
    double r_min = (double)d->consts[5];
    double psi_axis = (double)axis[0];
    double a_ns = 1.0 / (dz * dz);
    double a_c = -2.0 * (1.0 / (dr * dr) + 1.0 / (dz * dz));
    for (uint32_t j = 0; j < nz; ++j) {
        for (uint32_t i = 0; i < nr; ++i) {
            uint32_t idx = j * nr + i;
            if (j == 0 || j == nz - 1 || i == 0 || i == nr - 1) {
                out[idx] = psi[idx];
                continue;
            }
            double r = r_min + (double)i * dr;
            double a_w = 1.0 / (dr * dr) + 1.0 / (2.0 * r * dr);
            double a_e = 1.0 / (dr * dr) - 1.0 / (2.0 * r * dr);
            double c = (double)psi[idx];
            double source = 0.0;
            if (psi_axis > 0.0) {
                double psin = c / psi_axis;
                if (psin > 0.0 && psin < 1.0)
                    source = r * p_axis * 4.0 * psin * (1.0 - psin);
            }
            double lap = a_w * (double)psi[idx - 1] + a_e * (double)psi[idx + 1]
                       + a_ns * (double)psi[idx - nr] + a_ns * (double)psi[idx + nr]
                       + a_c * c;
            out[idx] = (float)(c + omega * (-mu0 * r * source - lap) / a_c);
        }
    }
    return 0;
}
