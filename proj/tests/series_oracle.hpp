#pragma once

// Brute-force interpolation series in long double, written straight from the defining sums.
// Only meant for points at distance >= 0.1 from the integers; no acceleration, no node extraction.

#include <cmath>
#include <complex>

namespace oracle {

using lcplx = std::complex<long double>;
constexpr long double kPiL = 3.141592653589793238462643383279502884L;

inline lcplx sin_pi(lcplx w) { return std::sin(kPiL * w); }

// sum_{n>=1} (-1)^n / (w - n): averaged partial sums, error O(N^-2)
inline lcplx alt_tail_sum(lcplx w, long N = 2000000) {
    lcplx s = 0, prev = 0;
    for (long n = 1; n <= N + 1; ++n) {
        prev = s;
        s += ((n % 2) ? -1.0L : 1.0L) / (w - (long double)n);
    }
    return 0.5L * (s + prev);
}

// sum_{n>=1} 1 / (w - n)^2, Euler-Maclaurin tail after N terms
inline lcplx sq_sum(lcplx w, long N = 200000) {
    lcplx s = 0;
    for (long n = 1; n <= N; ++n) s += 1.0L / ((w - (long double)n) * (w - (long double)n));
    const lcplx r = (long double)N - w;  // tail of 1/(n-w)^2 from N+1
    s += 1.0L / r - 0.5L / (r * r) + 1.0L / (6.0L * r * r * r);
    return s;
}

// K_{mu,c}(w) = sin(pi w)/pi [sum (-1)^n T(n)/(w-n) + (b(mu) - c/2)/w]
inline lcplx K(long double mu, long double c, lcplx w) {
    lcplx s = 0;
    for (long n = 1; n < 4000; ++n) {
        const long double e = std::exp(-mu * n);
        if (e < 1e-40L) break;
        s += ((n % 2) ? -1.0L : 1.0L) * e / (w - (long double)n);
    }
    if (c != 0) s += -c * alt_tail_sum(w);
    const long double b = 1.0L / (std::exp(mu) + 1.0L);
    return sin_pi(w) / kPiL * (s + (b - 0.5L * c) / w);
}

// L_{mu,c}(w) = sin^2(pi w)/pi^2 [sum T(n)/(w-n)^2 + T'(n)/(w-n) + (mu/(e^mu - 1) - c)/w]
inline lcplx L(long double mu, long double c, lcplx w) {
    lcplx s = 0;
    for (long n = 1; n < 4000; ++n) {
        const long double e = std::exp(-mu * n);
        if (e < 1e-40L) break;
        const lcplx d = w - (long double)n;
        s += e / (d * d) - mu * e / d;
    }
    if (c != 0) s += -c * sq_sum(w);
    const lcplx sp = sin_pi(w) / kPiL;
    return sp * sp * (s + (mu / std::expm1(mu) - c) / w);
}

// M = L + (1-c) sin^2(pi w)/(pi w)^2
inline lcplx M(long double mu, long double c, lcplx w) {
    const lcplx sp = sin_pi(w) / (kPiL * w);
    return L(mu, c, w) + (1.0L - c) * sp * sp;
}

}  // namespace oracle
