#include "bsx/node_kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace bsx::kernels {

cplx sum_simple_scalar(const double* a, long lo, long hi, cplx w) {
    const double x = w.real(), y = w.imag();
    double re = 0.0, im = 0.0;
    for (long n = lo; n < hi; ++n) {
        const double dx = x - static_cast<double>(n);
        const double inv = 1.0 / (dx * dx + y * y);
        re += a[n] * dx * inv;
        im += a[n] * inv;
    }
    return {re, -y * im};
}

cplx sum_paired_scalar(const double* v, const double* d, long lo, long hi, cplx w) {
    const double x = w.real(), y = w.imag();
    double re = 0.0, im1 = 0.0, im2 = 0.0;
    for (long n = lo; n < hi; ++n) {
        const double dx = x - static_cast<double>(n);
        const double inv = 1.0 / (dx * dx + y * y);
        const double inv2 = inv * inv;
        re += v[n] * (dx * dx - y * y) * inv2 + d[n] * dx * inv;
        im1 += v[n] * dx * inv2;
        im2 += d[n] * inv;
    }
    return {re, -2.0 * y * im1 - y * im2};
}

namespace {

Backend detect() {
    const char* env = std::getenv("BSX_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return Backend::Scalar;
    return avx2_supported() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
    static std::atomic<Backend> b{detect()};
    return b;
}

}  // namespace

bool avx2_supported() {
#if defined(BSX_HAVE_AVX2_KERNELS)
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok;
#else
    return false;
#endif
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void force_backend(Backend b) {
    if (b == Backend::Avx2 && !avx2_supported()) return;
    current().store(b, std::memory_order_relaxed);
}

const char* backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

cplx sum_simple(const double* a, long lo, long hi, cplx w) {
    if (hi <= lo) return 0.0;
#if defined(BSX_HAVE_AVX2_KERNELS)
    if (active_backend() == Backend::Avx2) return sum_simple_avx2(a, lo, hi, w);
#endif
    return sum_simple_scalar(a, lo, hi, w);
}

cplx sum_paired(const double* v, const double* d, long lo, long hi, cplx w) {
    if (hi <= lo) return 0.0;
#if defined(BSX_HAVE_AVX2_KERNELS)
    if (active_backend() == Backend::Avx2) return sum_paired_avx2(v, d, lo, hi, w);
#endif
    return sum_paired_scalar(v, d, lo, hi, w);
}

cplx sum_simple_skip(const double* a, long lo, long hi, long skip, cplx w) {
    if (skip < lo || skip >= hi) return sum_simple(a, lo, hi, w);
    return sum_simple(a, lo, skip, w) + sum_simple(a, skip + 1, hi, w);
}

cplx sum_paired_skip(const double* v, const double* d, long lo, long hi, long skip, cplx w) {
    if (skip < lo || skip >= hi) return sum_paired(v, d, lo, hi, w);
    return sum_paired(v, d, lo, skip, w) + sum_paired(v, d, skip + 1, hi, w);
}

}  // namespace bsx::kernels
