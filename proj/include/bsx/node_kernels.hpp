#pragma once

#include "bsx/numerics.hpp"

namespace bsx::kernels {

// Explicit node sums used by every series evaluator. Coefficient arrays are indexed by n.
//   simple:  sum_{lo<=n<hi} a[n] / (w - n)
//   paired:  sum_{lo<=n<hi} v[n] / (w - n)^2 + d[n] / (w - n)
// Callers split ranges themselves to skip the extracted nearest node.

cplx sum_simple_scalar(const double* a, long lo, long hi, cplx w);
cplx sum_paired_scalar(const double* v, const double* d, long lo, long hi, cplx w);

#if defined(__x86_64__) || defined(__i386__)
#define BSX_HAVE_AVX2_KERNELS 1
cplx sum_simple_avx2(const double* a, long lo, long hi, cplx w);
cplx sum_paired_avx2(const double* v, const double* d, long lo, long hi, cplx w);
#endif

enum class Backend { Scalar, Avx2 };

bool avx2_supported();
// Picked once from CPU features; BSX_SIMD=scalar in the environment forces the reference path.
Backend active_backend();
void force_backend(Backend b);  // tests only; Avx2 on an unsupported CPU is ignored
const char* backend_name(Backend b);

cplx sum_simple(const double* a, long lo, long hi, cplx w);
cplx sum_paired(const double* v, const double* d, long lo, long hi, cplx w);

// Same sums with one index skipped (skip outside [lo,hi) is allowed).
cplx sum_simple_skip(const double* a, long lo, long hi, long skip, cplx w);
cplx sum_paired_skip(const double* v, const double* d, long lo, long hi, long skip, cplx w);

}  // namespace bsx::kernels
