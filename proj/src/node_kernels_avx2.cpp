// Built with -mavx2 -mfma; only reached after the runtime CPU check.
#include "bsx/node_kernels.hpp"

#if defined(BSX_HAVE_AVX2_KERNELS)
#include <immintrin.h>

namespace bsx::kernels {

namespace {
inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}
}  // namespace

cplx sum_simple_avx2(const double* a, long lo, long hi, cplx w) {
    const double x = w.real(), y = w.imag();
    const __m256d vx = _mm256_set1_pd(x);
    const __m256d vy2 = _mm256_set1_pd(y * y);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d step = _mm256_set1_pd(4.0);
    __m256d vn = _mm256_setr_pd(lo, lo + 1.0, lo + 2.0, lo + 3.0);
    __m256d re = _mm256_setzero_pd(), im = _mm256_setzero_pd();
    long n = lo;
    for (; n + 4 <= hi; n += 4) {
        const __m256d va = _mm256_loadu_pd(a + n);
        const __m256d dx = _mm256_sub_pd(vx, vn);
        const __m256d den = _mm256_fmadd_pd(dx, dx, vy2);
        const __m256d inv = _mm256_div_pd(one, den);
        const __m256d ai = _mm256_mul_pd(va, inv);
        re = _mm256_fmadd_pd(ai, dx, re);
        im = _mm256_add_pd(im, ai);
        vn = _mm256_add_pd(vn, step);
    }
    cplx tail = sum_simple_scalar(a, n, hi, w);
    return {hsum(re) + tail.real(), -y * hsum(im) + tail.imag()};
}

cplx sum_paired_avx2(const double* v, const double* d, long lo, long hi, cplx w) {
    const double x = w.real(), y = w.imag();
    const __m256d vx = _mm256_set1_pd(x);
    const __m256d vy2 = _mm256_set1_pd(y * y);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d step = _mm256_set1_pd(4.0);
    __m256d vn = _mm256_setr_pd(lo, lo + 1.0, lo + 2.0, lo + 3.0);
    __m256d re = _mm256_setzero_pd(), im1 = _mm256_setzero_pd(), im2 = _mm256_setzero_pd();
    long n = lo;
    for (; n + 4 <= hi; n += 4) {
        const __m256d vv = _mm256_loadu_pd(v + n);
        const __m256d vd = _mm256_loadu_pd(d + n);
        const __m256d dx = _mm256_sub_pd(vx, vn);
        const __m256d den = _mm256_fmadd_pd(dx, dx, vy2);
        const __m256d inv = _mm256_div_pd(one, den);
        const __m256d inv2 = _mm256_mul_pd(inv, inv);
        const __m256d vi2 = _mm256_mul_pd(vv, inv2);
        const __m256d di = _mm256_mul_pd(vd, inv);
        const __m256d num = _mm256_fmsub_pd(dx, dx, vy2);
        re = _mm256_fmadd_pd(vi2, num, re);
        re = _mm256_fmadd_pd(di, dx, re);
        im1 = _mm256_fmadd_pd(vi2, dx, im1);
        im2 = _mm256_add_pd(im2, di);
        vn = _mm256_add_pd(vn, step);
    }
    cplx tail = sum_paired_scalar(v, d, n, hi, w);
    return {hsum(re) + tail.real(), -2.0 * y * hsum(im1) - y * hsum(im2) + tail.imag()};
}

}  // namespace bsx::kernels
#endif
