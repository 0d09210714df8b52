#include "bsx/series_blocks.hpp"

#include "bsx/errors.hpp"

#include <cmath>

namespace bsx::blocks {

namespace {
constexpr double kTailRadius = 32.0;

long tail_start(cplx s) {
    long m = 1;
    while (std::abs(s + static_cast<double>(m)) < kTailRadius) ++m;
    return m;
}

// d[j] = (-1)^j j! / (s+M)^{j+1}
void reciprocal_derivs(cplx s, long M, cplx* d) {
    const cplx r = 1.0 / (s + static_cast<double>(M));
    cplx p = r;
    double fact = 1.0;
    for (int j = 0; j < kTailDerivs; ++j) {
        d[j] = (j % 2 ? -fact : fact) * p;
        p *= r;
        fact *= (j + 1);
    }
}
}  // namespace

NodeFrame frame(cplx w) {
    if (!(std::abs(w.real()) < 1e15) || !std::isfinite(w.imag()))
        throw DomainError("evaluation point out of range");
    NodeFrame f;
    f.n0 = std::lround(w.real());
    f.u = w - static_cast<double>(f.n0);
    const cplx su = sin_pi(f.u) / kPi;
    f.s = (f.n0 % 2 == 0) ? su : -su;
    f.s2 = su * su;
    return f;
}

cplx alt_inverse_sum(cplx s) {
    const long M = tail_start(s);
    cplx acc = 0.0;
    for (long m = 1; m < M; ++m) acc += (m % 2 ? -1.0 : 1.0) / (s + static_cast<double>(m));
    cplx d[kTailDerivs];
    reciprocal_derivs(s, M, d);
    const cplx tail = boole_tail(d, kTailDerivs);
    return acc + (M % 2 ? -tail : tail);
}

cplx inverse_square_sum(cplx s) {
    const long M = tail_start(s);
    cplx acc = 0.0;
    for (long m = 1; m < M; ++m) {
        const cplx r = 1.0 / (s + static_cast<double>(m));
        acc += r * r;
    }
    cplx d[kTailDerivs];
    reciprocal_derivs(s, M, d);
    return acc + telescoping_tail(d, kTailDerivs);
}

cplx A1(cplx w, const NodeFrame& f) {
    if (w.real() >= 0) return 1.0 - sinc(w) - f.s * alt_inverse_sum(w);
    return -f.s * alt_inverse_sum(-w);
}

cplx A2(cplx w, const NodeFrame& f) {
    if (w.real() >= 0) {
        const cplx sw = sinc(w);
        return 1.0 - sw * sw - f.s2 * inverse_square_sum(w);
    }
    return f.s2 * inverse_square_sum(-w);
}

cplx Q1(cplx w) {
    const cplx sw = sinc(w);
    return w * sw * sw;
}

}  // namespace bsx::blocks
