#include "bsx/errors.hpp"
#include "bsx/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <vector>

namespace bsx {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

const double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                       0.207784955007898467600689403773245, 0.0};
const double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                       0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Segment {
    double a, b;
    T value;
    double err;
    double absval;  // integral of |f|, for the roundoff floor
    bool operator<(const Segment& o) const { return err < o.err; }
};

template <class T, class F>
Segment<T> gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T fc = f(c);
    T resk = fc * wgk[7];
    T resg = fc * wg[3];
    double resabs = std::abs(fc) * wgk[7];
    T fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        fv1[j] = f(c - dx);
        fv2[j] = f(c + dx);
        resk += wgk[j] * (fv1[j] + fv2[j]);
        resabs += wgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) resg += wg[j / 2] * (fv1[j] + fv2[j]);
    }
    const T mean = resk * 0.5;
    double resasc = wgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) resasc += wgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    resasc *= std::abs(h);
    resabs *= std::abs(h);
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
    return {a, b, resk * h, err, resabs};
}

template <class T, class F>
QuadResultT<T> adaptive_gk(const F& f, double a, double b, double tol) {
    if (!(tol > 0)) throw DomainError("quadrature tolerance must be positive");
    if (a == b) return {T{}, 0.0, 1};
    std::priority_queue<Segment<T>> heap;
    auto first = gk15<T>(f, a, b);
    heap.push(first);
    long evals = 15;
    T total = first.value;
    double total_err = first.err;
    double total_abs = first.absval;
    const int max_segments = 5000;
    // each segment reports at least 50 eps * int|f| (roundoff), so accept below 1000 eps * int|f|
    auto floor = [&] { return std::max(10.0 * kEps * std::abs(total), 1000.0 * kEps * total_abs); };
    while (10.0 * total_err > std::max(tol, floor())) {
        if (static_cast<int>(heap.size()) >= max_segments)
            throw NonConvergence("adaptive Gauss-Kronrod: segment budget exhausted");
        Segment<T> worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid == worst.a || mid == worst.b) {
            throw NonConvergence("adaptive Gauss-Kronrod: interval collapsed");
        }
        auto left = gk15<T>(f, worst.a, mid);
        auto right = gk15<T>(f, mid, worst.b);
        evals += 30;
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        total_abs += left.absval + right.absval - worst.absval;
        heap.push(left);
        heap.push(right);
        // recompute the sums from scratch every so often to avoid drift
        if (heap.size() % 64 == 0 || 10.0 * total_err <= std::max(tol, floor())) {
            total_err = 0.0;
            total_abs = 0.0;
            T fresh{};
            auto copy = heap;
            while (!copy.empty()) {
                total_err += copy.top().err;
                total_abs += copy.top().absval;
                fresh += copy.top().value;
                copy.pop();
            }
            total = fresh;
        }
    }
    if (!std::isfinite(std::abs(total))) throw NonConvergence("adaptive Gauss-Kronrod: non-finite result");
    return {total, 10.0 * total_err, evals};
}

// Double-exponential rules share the level loop; `node(t)` fills abscissa and weight.
template <class T, class F, class Node>
QuadResultT<T> de_levels(const F& f, const Node& node, double tmax, double tol, const char* name) {
    long evals = 0;
    double abs_sum = 0.0;  // sum of |terms|, for the roundoff floor
    auto term_at = [&](double t, bool& ok) -> T {
        double x, w;
        ok = node(t, x, w);
        if (!ok || w == 0.0) return T{};
        T v = f(x);
        ++evals;
        T r = v * w;
        if (!std::isfinite(std::abs(r))) {
            ok = false;
            return T{};
        }
        abs_sum += std::abs(r);
        return r;
    };
    // One-sided walk outwards from t0 with step 2h (level refinement) or h (level 0).
    auto walk = [&](double t0, double step, double dir, T ref) -> T {
        CompensatedSum<T> s;
        int small = 0;
        for (int j = 0;; ++j) {
            const double t = t0 + dir * step * j;
            if (std::abs(t) > tmax) break;
            bool ok;
            T v = term_at(t, ok);
            if (!ok) {
                if (std::abs(t) > 1.0) break;
                continue;
            }
            s.add(v);
            const double scale = std::max(std::abs(ref), std::abs(s.value()));
            if (std::abs(v) <= 1e-20 * scale && std::abs(t) > 1.0) {
                if (++small >= 3) break;
            } else {
                small = 0;
            }
        }
        return s.value();
    };

    double h = 1.0;
    bool ok;
    T sum = term_at(0.0, ok);
    sum += walk(h, h, 1.0, sum) + walk(-h, h, -1.0, sum);
    T estimate = sum * h;
    double err = std::numeric_limits<double>::infinity();
    const int max_level = 12;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        T extra = walk(h, 2.0 * h, 1.0, sum) + walk(-h, 2.0 * h, -1.0, sum);
        sum += extra;
        T next = sum * h;
        err = std::abs(next - estimate);
        estimate = next;
        const double floor = std::max(4.0 * kEps * std::abs(estimate), 64.0 * kEps * abs_sum * h);
        if (level >= 3 && (10.0 * err <= tol || err <= floor)) {
            if (!std::isfinite(std::abs(estimate))) break;
            return {estimate, std::max(10.0 * err, 0.0), std::max(evals, 1L)};
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: tolerance %.3g not reached (last error estimate %.3g, value %.17g)", name, tol,
                  err, std::abs(estimate));
    throw NonConvergence(buf);
}

template <class T, class F>
QuadResultT<T> tanh_sinh_impl(const F& f, double a, double b, double tol) {
    if (!(tol > 0)) throw DomainError("quadrature tolerance must be positive");
    if (a == b) return {T{}, 0.0, 1};
    const double width = b - a;
    auto node = [&](double t, double& x, double& w) {
        const double u = 0.5 * kPi * std::sinh(std::abs(t));
        const double e = std::exp(-2.0 * u);
        const double c = e / (1.0 + e);  // (1 - tanh u)/2
        if (c == 0.0) return false;
        x = t >= 0 ? b - width * c : a + width * c;
        if (!(x > std::min(a, b) && x < std::max(a, b))) return false;
        w = width * kPi * std::cosh(t) * c * (1.0 - c);
        return true;
    };
    return de_levels<T>(f, node, 6.5, tol, "tanh-sinh");
}

template <class T, class F>
QuadResultT<T> exp_sinh_impl(const F& f, double lower, double decay, double sing, double tol) {
    if (!(tol > 0)) throw DomainError("quadrature tolerance must be positive");
    if (!(sing < 1.0)) throw DomainError("integrate_semi_infinite: singular_exponent must be < 1");
    const double s = decay > 0 ? 1.0 / decay : 1.0;
    auto node = [&](double t, double& x, double& w) {
        const double u = 0.5 * kPi * std::sinh(t);
        if (u > 700.0) return false;
        const double e = std::exp(u);
        const double dx = s * e;
        if (!(dx > 0.0) || dx > 1e300) return false;
        x = lower + dx;
        if (!(x > lower)) return false;
        w = dx * 0.5 * kPi * std::cosh(t);
        return std::isfinite(w);
    };
    return de_levels<T>(f, node, 7.0, tol, "exp-sinh");
}

}  // namespace

namespace detail {
QuadResult gk(const RealFn& f, double a, double b, double tol) { return adaptive_gk<double>(f, a, b, tol); }
QuadResultC gk(const ComplexFn& f, double a, double b, double tol) { return adaptive_gk<cplx>(f, a, b, tol); }
QuadResult tanh_sinh(const RealFn& f, double a, double b, double tol) { return tanh_sinh_impl<double>(f, a, b, tol); }
QuadResultC tanh_sinh(const ComplexFn& f, double a, double b, double tol) {
    return tanh_sinh_impl<cplx>(f, a, b, tol);
}
QuadResult exp_sinh(const RealFn& f, double lower, double decay, double sing, double tol) {
    return exp_sinh_impl<double>(f, lower, decay, sing, tol);
}
QuadResultC exp_sinh(const ComplexFn& f, double lower, double decay, double sing, double tol) {
    return exp_sinh_impl<cplx>(f, lower, decay, sing, tol);
}
}  // namespace detail

QuadResultC integrate_vertical_line(const std::function<cplx(cplx)>& g, double beta, double envelope_rate,
                                    double tol) {
    if (beta >= 0 && beta == std::floor(beta))
        throw DomainError("integrate_vertical_line: beta must not be a nonnegative integer");
    if (!(envelope_rate > 0)) throw DomainError("integrate_vertical_line: envelope_rate must be positive");
    auto h = [&](double v) { return g(cplx(beta, v)); };
    // Height V: the envelope tail 2*|g(beta +- iV)|/rate must fall below tol/10.
    double V = 2.0;
    for (;;) {
        const double amp = std::max(std::abs(h(V)), std::abs(h(-V)));
        if (2.0 * amp / envelope_rate / (2.0 * kPi) < tol / 10.0) break;
        V += 2.0;
        if (V > 200.0) throw NonConvergence("integrate_vertical_line: integrand does not decay");
    }
    // unit pieces keep the Kronrod rule inside the regime where the sine factors are tame
    CompensatedSum<cplx> acc;
    double err = 0.0;
    long evals = 0;
    const int pieces = static_cast<int>(std::ceil(V));
    for (int j = -pieces; j < pieces; ++j) {
        const double lo = V * j / pieces, hi = V * (j + 1) / pieces;
        auto r = adaptive_gk<cplx>(h, lo, hi, tol / (4.0 * pieces));
        acc.add(r.value);
        err += r.abs_err;
        evals += r.evals;
    }
    return {acc.value() / (2.0 * kPi), err / (2.0 * kPi) + tol / 10.0, evals};
}

}  // namespace bsx
