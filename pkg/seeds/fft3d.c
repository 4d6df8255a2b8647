/* fft3d seed: textbook iterative radix-2 transform per line, one axis per
 * entry.  Each entry reads buf[0] and writes buf[1]; the harness swaps the
 * two after every entry, so the chain x -> y -> z leaves the result in
 * buf[0].  Data is interleaved (re, im) float pairs, row-major [N][N][N]. */
#include "ks_abi.h"
#include <math.h>

#define KS_FFT_MAX_N 1024u

static void fft_line(const float *in, float *out, uint32_t n, uint64_t stride)
{
    float re[KS_FFT_MAX_N], im[KS_FFT_MAX_N];
    uint32_t bits = 0;
    while ((1u << bits) < n)
        ++bits;
    /* bit-reversed load */
    for (uint32_t k = 0; k < n; ++k) {
        uint32_t r = 0;
        for (uint32_t b = 0; b < bits; ++b)
            r |= ((k >> b) & 1u) << (bits - 1u - b);
        re[k] = in[2u * (uint64_t)r * stride];
        im[k] = in[2u * (uint64_t)r * stride + 1u];
    }
    for (uint32_t len = 2; len <= n; len <<= 1) {
        uint32_t half = len >> 1;
        double theta = -6.283185307179586476925286766559 / (double)len;
        for (uint32_t start = 0; start < n; start += len) {
            for (uint32_t k = 0; k < half; ++k) {
                float wr = (float)cos(theta * (double)k);
                float wi = (float)sin(theta * (double)k);
                uint32_t a = start + k;
                uint32_t b = a + half;
                float xr = re[b] * wr - im[b] * wi;
                float xi = re[b] * wi + im[b] * wr;
                float er = re[a];
                float ei = im[a];
                re[a] = er + xr;
                im[a] = ei + xi;
                re[b] = er - xr;
                im[b] = ei - xi;
            }
        }
    }
    for (uint32_t k = 0; k < n; ++k) {
        out[2u * (uint64_t)k * stride] = re[k];
        out[2u * (uint64_t)k * stride + 1u] = im[k];
    }
}

static int32_t fft_axis(ks_descriptor *d, int axis)
{
    const float *in = (const float *)d->buf[0];
    float *out = (float *)d->buf[1];
    uint32_t n = d->params[0];
    if (n > KS_FFT_MAX_N || (n & (n - 1u)) != 0u)
        return 2;
    uint64_t n64 = n;
    for (uint32_t a = 0; a < n; ++a) {
        for (uint32_t b = 0; b < n; ++b) {
            uint64_t base, stride;
            if (axis == 0) { /* x: contiguous lines */
                base = ((uint64_t)a * n64 + b) * n64;
                stride = 1;
            } else if (axis == 1) { /* y */
                base = (uint64_t)a * n64 * n64 + b;
                stride = n64;
            } else { /* z */
                base = (uint64_t)a * n64 + b;
                stride = n64 * n64;
            }
            fft_line(in + 2u * base, out + 2u * base, n, stride);
        }
    }
    return 0;
}

int32_t fft3d_x(ks_descriptor *d) { return fft_axis(d, 0); }
int32_t fft3d_y(ks_descriptor *d) { return fft_axis(d, 1); }
int32_t fft3d_z(ks_descriptor *d) { return fft_axis(d, 2); }
