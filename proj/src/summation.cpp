#include "bsx/errors.hpp"
#include "bsx/numerics.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace bsx {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

const double kBernoulli[16] = {1.0,
                               1.0 / 6,
                               -1.0 / 30,
                               1.0 / 42,
                               -1.0 / 30,
                               5.0 / 66,
                               -691.0 / 2730,
                               7.0 / 6,
                               -3617.0 / 510,
                               43867.0 / 798,
                               -174611.0 / 330,
                               854513.0 / 138,
                               -236364091.0 / 2730,
                               8553103.0 / 6,
                               -23749461029.0 / 870,
                               8615841276005.0 / 14322};

double factorial(int n) { return std::tgamma(n + 1.0); }

// Cohen-Rodriguez Villegas-Zagier, algorithm 1: sum_{k>=0} (-1)^k a_k.
template <class T, class A>
T cvz(const A& a, int n) {
    double d = std::pow(3.0 + std::sqrt(8.0), n);
    d = 0.5 * (d + 1.0 / d);
    double b = -1.0, c = -d;
    T s{};
    for (int k = 0; k < n; ++k) {
        c = b - c;
        s += c * a(k);
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0));
    }
    return s / d;
}

template <class T, class Term>
SumResultT<T> alternating_impl(const Term& term, double tol, long first) {
    if (!(tol > 0)) throw DomainError("summation tolerance must be positive");
    // estimate with `head` direct terms and CVZ of order n on the rest
    auto estimate = [&](long head, int n) {
        CompensatedSum<T> s;
        for (long j = 0; j < head; ++j) s.add(term(first + j));
        const long start = first + head;
        auto a = [&](int k) -> T { return (k % 2 ? -1.0 : 1.0) * term(start + k); };
        return s.value() + cvz<T>(a, n);
    };
    const T e1 = estimate(0, 26);
    const T e2 = estimate(12, 34);
    const double diff = std::abs(e1 - e2);
    if (std::isfinite(diff) && 10.0 * diff <= tol) return {e2, 10.0 * diff + 4.0 * kEps * std::abs(e2), 12 + 34};

    // Fallback: averaged partial sums A(N) = (P(N)+P(N+1))/2 at N = N0*2^j, Richardson in 1/N^2.
    const int levels = 11;
    const long n0 = 1000;
    std::vector<T> avg;
    CompensatedSum<T> p;
    long n = first;
    long target = n0;
    long used = 0;
    for (int j = 0; j < levels; ++j) {
        while (n < first + target) {
            p.add(term(n++));
            ++used;
        }
        const T next = term(n);
        avg.push_back(p.value() + 0.5 * next);
        target *= 2;
    }
    std::vector<std::vector<T>> R(levels);
    for (int j = 0; j < levels; ++j) {
        R[j].push_back(avg[j]);
        for (int m = 1; m <= j && m <= 4; ++m) {
            const double f = std::pow(4.0, m);
            R[j].push_back((f * R[j][m - 1] - R[j - 1][m - 1]) / (f - 1.0));
        }
    }
    const T best = R[levels - 1].back();
    const T prev = R[levels - 2].back();
    const double err = 10.0 * std::abs(best - prev);
    if (!(err <= tol))
        throw NonConvergence("sum_alternating: neither acceleration nor paired-term extrapolation reached tolerance");
    return {best, err, used + 1};
}

template <class T, class Term, class Est>
SumResultT<T> absolute_impl(const Term& term, const std::function<double(long)>& tail_bound, double tol,
                            const Est& tail_estimate, long first) {
    if (!(tol > 0)) throw DomainError("summation tolerance must be positive");
    long N = first + 15;
    while (!(tail_bound(N) <= tol)) {
        if (N > (1L << 28)) throw NonConvergence("sum_absolute: tail bound does not fall below tolerance");
        N = 2 * N;
    }
    CompensatedSum<T> s;
    double mag = 0.0;
    for (long n = first; n <= N; ++n) {
        const T v = term(n);
        s.add(v);
        mag += std::abs(v);
    }
    T value = s.value();
    if (tail_estimate) value += tail_estimate(N);
    return {value, tail_bound(N) + 4.0 * kEps * mag, N - first + 1};
}

}  // namespace

double bernoulli_even(int k) {
    if (k < 0 || k > 15) throw DomainError("bernoulli_even: index out of table");
    return kBernoulli[k];
}

cplx boole_tail(const cplx* d, int count) {
    cplx s = 0.5 * d[0];
    double last = std::abs(s);
    for (int k = 1; 2 * k - 1 < count && k <= 15; ++k) {
        const double coef = -(std::ldexp(1.0, 2 * k) - 1.0) * kBernoulli[k] / factorial(2 * k);
        const cplx t = coef * d[2 * k - 1];
        const double at = std::abs(t);
        if (at > last) break;  // asymptotic series started to diverge
        s += t;
        if (at <= kEps * 1e-3 * std::abs(s)) break;
        last = at;
    }
    return s;
}

cplx telescoping_tail(const cplx* d, int count) {
    cplx s = d[0];
    if (count < 2) return s;
    s -= 0.5 * d[1];
    double last = std::abs(d[1]);
    for (int k = 1; 2 * k < count && k <= 15; ++k) {
        const cplx t = kBernoulli[k] / factorial(2 * k) * d[2 * k];
        const double at = std::abs(t);
        if (at > last) break;
        s += t;
        if (at <= kEps * 1e-3 * std::abs(s)) break;
        last = at;
    }
    return s;
}

namespace detail {
SumResult alternating(const std::function<double(long)>& term, double tol, long first) {
    return alternating_impl<double>(term, tol, first);
}
SumResultC alternating(const std::function<cplx(long)>& term, double tol, long first) {
    return alternating_impl<cplx>(term, tol, first);
}
SumResult absolute(const std::function<double(long)>& term, const std::function<double(long)>& bound, double tol,
                   const std::function<double(long)>& est, long first) {
    return absolute_impl<double>(term, bound, tol, est, first);
}
SumResultC absolute(const std::function<cplx(long)>& term, const std::function<double(long)>& bound, double tol,
                    const std::function<cplx(long)>& est, long first) {
    return absolute_impl<cplx>(term, bound, tol, est, first);
}
}  // namespace detail

double sin_pi(double x) {
    double r = std::remainder(x, 2.0);  // exact, in [-1, 1]
    if (r == 0.0 || std::abs(r) == 1.0) return 0.0;
    if (r > 0.5) r = 1.0 - r;
    if (r < -0.5) r = -1.0 - r;
    return std::sin(kPi * r);
}

namespace {
double cos_pi(double x) {
    double r = std::abs(std::remainder(x, 2.0));
    double sign = 1.0;
    if (r > 0.5) {
        r = 1.0 - r;
        sign = -1.0;
    }
    if (r == 0.5) return 0.0;
    if (r < 0.25) return sign * std::cos(kPi * r);
    return sign * std::sin(kPi * (0.5 - r));
}
}  // namespace

cplx sin_pi(cplx z) {
    const double x = z.real(), y = z.imag();
    return {sin_pi(x) * std::cosh(kPi * y), cos_pi(x) * std::sinh(kPi * y)};
}

cplx sinc(cplx z) {
    const cplx u = kPi * z;
    if (std::abs(u) < 1e-3) {
        const cplx u2 = u * u;
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
    }
    return sin_pi(z) / u;
}

double sinc(double x) {
    const double u = kPi * x;
    if (std::abs(u) < 1e-3) {
        const double u2 = u * u;
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
    }
    return sin_pi(x) / u;
}

}  // namespace bsx
