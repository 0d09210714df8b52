#include "bsx/integral_oracle.hpp"

#include "bsx/errors.hpp"

#include <cmath>

namespace bsx {

namespace {

void check_x(double lambda, double x) {
    if (!(lambda >= 0) || !std::isfinite(lambda)) throw DomainError("lambda must be a nonnegative finite number");
    if (x == 0) throw DomainError("the integral representation excludes x = 0");
    if (!std::isfinite(x)) throw DomainError("x must be finite");
}

void check_k(int k) {
    if (k != 1 && k != 2) throw DomainError("k must be 1 or 2");
}

}  // namespace

double oracle_K_diff(double lambda, double x, double tol) {
    check_x(lambda, x);
    const double s = sin_pi(x);
    if (s == 0.0) return 0.0;
    const double bl = eval_b(lambda);
    // both branches written over t in (0, inf) with weight e^{-|x| t}
    auto f = [&](double t) {
        const double d = x < 0 ? eval_b(lambda + t) - bl : bl - eval_b(lambda - t);
        return d * std::exp(-std::abs(x) * t);
    };
    const auto r = integrate_semi_infinite(f, 0.0, std::abs(x), 0.0, tol);
    return s / kPi * r.value;
}

double oracle_M_diff(double lambda, double x, double tol) {
    check_x(lambda, x);
    const double s = sin_pi(x);
    if (s == 0.0) return 0.0;
    const double Bl = eval_B(lambda);
    auto f = [&](double t) {
        const double d = x < 0 ? eval_B(lambda + t) - Bl : Bl - eval_B(lambda - t);
        return d * std::exp(-std::abs(x) * t);
    };
    const auto r = integrate_semi_infinite(f, 0.0, std::abs(x), 0.0, tol);
    return s * s / (kPi * kPi) * r.value;
}

double kl_sign_integrand(double lambda, double w) {
    return eval_b(lambda + w) - eval_b(lambda) - std::exp(-lambda) * (eval_b(w) - 0.5);
}

double ml_sign_integrand(double lambda, double w) {
    // e^{-lambda} g, rewritten with B(x) - x = B(-x) so that no term is of unit size at large lambda
    return eval_B(-lambda - w) - eval_B(-lambda) - std::exp(-lambda) * eval_B_minus_one(-w);
}

ContourTarget ContourTarget::shifted_exponential(double lambda, double a) {
    ContourTarget t;
    t.lambda_ = lambda;
    t.a_ = a;
    BaseParams p;
    p.lambda = lambda;
    p.delta = 1.0 / a;
    p.c = std::exp(-lambda);
    t.base1_ = std::make_shared<BaseApproximant>(BaseApproximant::unchecked(Kind::TwoSided, p));
    t.base2_ = std::make_shared<BaseApproximant>(BaseApproximant::unchecked(Kind::Minorant, p));
    return t;
}

ContourTarget ContourTarget::subordinated(std::shared_ptr<const Measure> m, double a) {
    if (!m) throw DomainError("measure handle is null");
    if (!(a > 0)) throw DomainError("a must be positive");
    ContourTarget t;
    t.a_ = a;
    t.m_ = m;
    t.sub1_ = std::make_shared<SubordinatedApproximant>(Kind::TwoSided, m, 1.0 / a, kApproxTol, false);
    t.sub2_ = std::make_shared<SubordinatedApproximant>(Kind::Minorant, m, 1.0 / a, kApproxTol, false);
    return t;
}

cplx ContourTarget::value(cplx w) const {
    if (!(w.real() > 0)) throw DomainError("Phi is defined on Re w > 0");
    if (m_) return m_->T_complex(a_, w);
    return std::exp(-a_ * lambda_ * w) - std::exp(-lambda_);
}

cplx ContourTarget::series(int k, cplx z) const {
    check_k(k);
    if (m_) return k == 1 ? sub1_->series_part(z) : sub2_->series_part(z);
    return k == 1 ? base1_->series_part(z) : base2_->series_part(z);
}

QuadResultC eval_I_k(int k, double beta, const ContourTarget& phi, cplx z, double tol) {
    check_k(k);
    if (!(beta > 0) || beta == std::floor(beta)) throw DomainError("beta must be a positive non-integer");
    if (z.real() == beta) throw DomainError("z lies on the integration line Re w = beta");
    auto g = [&](cplx w) {
        cplx r = phi.value(w) / ((z - w) * sin_pi(w));
        return k == 2 ? r / sin_pi(w) : r;
    };
    const cplx sz = sin_pi(z);
    const cplx factor = k == 1 ? sz : sz * sz;
    // the integral is computed without the (sin pi z)^k factor, so rescale the tolerance
    const double scale = std::max(1.0, std::abs(factor));
    auto r = integrate_vertical_line(g, beta, phi.envelope_rate(k), tol / scale);
    r.value *= factor;
    r.abs_err *= std::abs(factor);
    return r;
}

double contour_B(int k, double beta, const ContourTarget& phi, double tol) {
    check_k(k);
    auto f = [&](double v) {
        const cplx w(beta, v);
        return std::abs(phi.value(w) / w) * std::exp(-k * kPi * v);
    };
    auto g = [&](double v) {
        const cplx w(beta, -v);
        return std::abs(phi.value(w) / w) * std::exp(-k * kPi * v);
    };
    const double up = integrate_semi_infinite(f, 0.0, k * kPi, 0.0, tol).value;
    const double down = integrate_semi_infinite(g, 0.0, k * kPi, 0.0, tol).value;
    return std::ldexp(1.0, k - 1) / kPi * (up + down);
}

double contour_bound(int k, double beta, const ContourTarget& phi, cplx z, double tol) {
    const double x = z.real(), y = z.imag();
    if (x == beta) throw DomainError("z lies on the integration line Re w = beta");
    const double csc = 1.0 / std::abs(sin_pi(beta));
    return contour_B(k, beta, phi, tol) * std::pow(csc, k) * (1.0 + std::abs(z) / std::abs(x - beta)) *
           std::exp(k * kPi * std::abs(y));
}

}  // namespace bsx
