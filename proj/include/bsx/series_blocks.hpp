#pragma once

#include "bsx/numerics.hpp"

namespace bsx::blocks {

// Nearest node and the sine factor written through it: sin(pi w) = (-1)^n0 sin(pi (w - n0)).
struct NodeFrame {
    long n0;
    cplx u;     // w - n0
    cplx s;     // sin(pi w)/pi
    cplx s2;    // sin^2(pi w)/pi^2
};
NodeFrame frame(cplx w);

// sum_{m>=1} (-1)^m/(s+m) and sum_{m>=1} 1/(s+m)^2, for Re s >= 0.
cplx alt_inverse_sum(cplx s);
cplx inverse_square_sum(cplx s);

// A1(w) = sin(pi w)/pi * sum_{n>=1} (-1)^n/(w-n)
// A2(w) = sin^2(pi w)/pi^2 * sum_{n>=1} 1/(w-n)^2
// both entire, evaluated through the reflection formulas
cplx A1(cplx w, const NodeFrame& f);
cplx A2(cplx w, const NodeFrame& f);

// w * sinc(w)^2 = sin^2(pi w)/(pi^2 w)
cplx Q1(cplx w);

}  // namespace bsx::blocks
