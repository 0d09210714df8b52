#pragma once

#include <complex>
#include <functional>
#include <type_traits>

namespace bsx {

using cplx = std::complex<double>;

constexpr double kDefaultTol = 1e-10;
constexpr double kPi = 3.14159265358979323846264338327950288;

template <class T>
struct QuadResultT {
    T value{};
    double abs_err = 0.0;
    long evals = 0;
};
using QuadResult = QuadResultT<double>;
using QuadResultC = QuadResultT<cplx>;

template <class T>
struct SumResultT {
    T value{};
    double abs_err = 0.0;
    long terms_used = 0;
};
using SumResult = SumResultT<double>;
using SumResultC = SumResultT<cplx>;

using RealFn = std::function<double(double)>;
using ComplexFn = std::function<cplx(double)>;

namespace detail {
template <class F>
inline constexpr bool returns_complex = std::is_same_v<std::decay_t<std::invoke_result_t<F, double>>, cplx>;
template <class F>
inline constexpr bool term_complex = std::is_same_v<std::decay_t<std::invoke_result_t<F, long>>, cplx>;

QuadResult gk(const RealFn& f, double a, double b, double tol);
QuadResultC gk(const ComplexFn& f, double a, double b, double tol);
QuadResult tanh_sinh(const RealFn& f, double a, double b, double tol);
QuadResultC tanh_sinh(const ComplexFn& f, double a, double b, double tol);
QuadResult exp_sinh(const RealFn& f, double lower, double decay, double sing, double tol);
QuadResultC exp_sinh(const ComplexFn& f, double lower, double decay, double sing, double tol);
SumResult alternating(const std::function<double(long)>& term, double tol, long first);
SumResultC alternating(const std::function<cplx(long)>& term, double tol, long first);
SumResult absolute(const std::function<double(long)>& term, const std::function<double(long)>& bound, double tol,
                   const std::function<double(long)>& est, long first);
SumResultC absolute(const std::function<cplx(long)>& term, const std::function<double(long)>& bound, double tol,
                    const std::function<cplx(long)>& est, long first);
}  // namespace detail

// Adaptive Gauss-Kronrod (7/15) on [a,b]. Smooth integrands. f may return double or cplx.
template <class F>
auto integrate_gk(const F& f, double a, double b, double tol = kDefaultTol) {
    if constexpr (detail::returns_complex<F>)
        return detail::gk(ComplexFn(f), a, b, tol);
    else
        return detail::gk(RealFn(f), a, b, tol);
}

// tanh-sinh on [a,b]; tolerates integrable endpoint singularities. Points are
// generated as endpoint +- width*c with c tiny, so a singularity sitting at 0 is
// resolved to full relative precision.
template <class F>
auto integrate_tanh_sinh(const F& f, double a, double b, double tol = kDefaultTol) {
    if constexpr (detail::returns_complex<F>)
        return detail::tanh_sinh(ComplexFn(f), a, b, tol);
    else
        return detail::tanh_sinh(RealFn(f), a, b, tol);
}

// exp-sinh on [lower, inf). decay is a rough exponential rate used to scale the
// abscissae; singular_exponent s means |f| = O((t-lower)^-s) near lower, s < 1.
template <class F>
auto integrate_semi_infinite(const F& f, double lower, double decay, double singular_exponent,
                             double tol = kDefaultTol) {
    if constexpr (detail::returns_complex<F>)
        return detail::exp_sinh(ComplexFn(f), lower, decay, singular_exponent, tol);
    else
        return detail::exp_sinh(RealFn(f), lower, decay, singular_exponent, tol);
}

// (2 pi i)^-1 * integral of g over the upward line Re w = beta.
// |g(beta+iv)| is assumed to decay like exp(-envelope_rate*|v|).
QuadResultC integrate_vertical_line(const std::function<cplx(cplx)>& g, double beta, double envelope_rate,
                                    double tol = kDefaultTol);

// sum_{n>=first} term(n), term alternating in sign. CVZ acceleration, certified
// by two independent orders; paired partial sums + Richardson as fallback.
template <class F>
auto sum_alternating(const F& term, double tol = kDefaultTol, long first = 1) {
    if constexpr (detail::term_complex<F>)
        return detail::alternating(std::function<cplx(long)>(term), tol, first);
    else
        return detail::alternating(std::function<double(long)>(term), tol, first);
}

// sum_{n>=first} term(n), truncated at the first N (doubling search) with tail_bound(N) <= tol,
// tail_bound(N) bounding sum_{n>N}. If tail_estimate is given it is added to the partial sum
// and tail_bound(N) must then bound |true tail - tail_estimate(N)|.
template <class F>
auto sum_absolute(const F& term, const std::function<double(long)>& tail_bound, double tol = kDefaultTol,
                  long first = 1) {
    if constexpr (detail::term_complex<F>)
        return detail::absolute(std::function<cplx(long)>(term), tail_bound, tol, {}, first);
    else
        return detail::absolute(std::function<double(long)>(term), tail_bound, tol, {}, first);
}
template <class F, class E>
auto sum_absolute(const F& term, const std::function<double(long)>& tail_bound, double tol, const E& tail_estimate,
                  long first = 1) {
    if constexpr (detail::term_complex<F>)
        return detail::absolute(std::function<cplx(long)>(term), tail_bound, tol,
                                std::function<cplx(long)>(tail_estimate), first);
    else
        return detail::absolute(std::function<double(long)>(term), tail_bound, tol,
                                std::function<double(long)>(tail_estimate), first);
}

// Asymptotic series tails. d[j] = f^(j)(N), j < count.
// boole_tail:        sum_{m>=0} (-1)^m f(N+m)
// telescoping_tail:  sum_{m>=0} -f'(N+m)   (Euler-Maclaurin; f -> 0 at infinity)
// Terms are added until they stop decreasing; valid when the derivatives grow like j!/R^j with R >~ 30.
cplx boole_tail(const cplx* d, int count);
cplx telescoping_tail(const cplx* d, int count);
// How many derivatives the two tails above will use at most.
constexpr int kTailDerivs = 22;

double bernoulli_even(int k);  // B_{2k}, 1 <= k <= 15

// sin(pi x) with exact zeros at integers.
double sin_pi(double x);
// sin(pi z) for complex z.
cplx sin_pi(cplx z);
// sin(pi z)/(pi z), with the removable point.
cplx sinc(cplx z);
double sinc(double x);

// Neumaier compensated accumulator.
template <class T>
struct CompensatedSum {
    T sum{};
    T comp{};
    void add(T v) {
        T t = sum + v;
        comp += add_error(sum, v, t);
        sum = t;
    }
    T value() const { return sum + comp; }

private:
    static double add_error(double s, double v, double t) {
        return std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    }
    static cplx add_error(cplx s, cplx v, cplx t) {
        return {add_error(s.real(), v.real(), t.real()), add_error(s.imag(), v.imag(), t.imag())};
    }
};

}  // namespace bsx
