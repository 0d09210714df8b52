#include "bsx/approximants.hpp"

#include "bsx/errors.hpp"
#include "bsx/node_kernels.hpp"

#include <cmath>

namespace bsx {

namespace {
constexpr long kMaxGeometricTerms = 50'000'000;

cplx sq(cplx v) { return v * v; }
}  // namespace

double q_function(double mu) {
    if (mu < 1.0) {
        // -sum_k B_{2k} mu^{2k-1}/(2k)!
        double s = 0.0, pw = mu, fact = 2.0;
        for (int k = 1; k <= 15; ++k) {
            s -= bernoulli_even(k) * pw / fact;
            pw *= mu * mu;
            fact *= (2.0 * k + 1) * (2.0 * k + 2);
        }
        return s;
    }
    return 1.0 / mu - 1.0 / std::expm1(mu) - 0.5;
}

BaseApproximant::BaseApproximant(Kind kind, const BaseParams& p, double tol) : BaseApproximant(kind, p, tol, true) {}

BaseApproximant BaseApproximant::unchecked(Kind kind, const BaseParams& p, double tol) {
    return BaseApproximant(kind, p, tol, false);
}

BaseApproximant::BaseApproximant(Kind kind, const BaseParams& p, double tol, bool check)
    : kind_(kind), p_(p), tol_(tol) {
    if (check) {
        validate(p, kind);
    } else {
        BaseParams loose = p;
        loose.c = std::min(p.c, 0.0);
        validate(loose, Kind::Majorant);
    }
    if (!(tol > 0)) throw DomainError("evaluation tolerance must be positive");
    mu_ = p.lambda / p.delta;
    // (1+mu) e^{-mu N}/(1-e^{-mu}) bounds the dropped part of the sinc-normalized sum for real w
    const double n = (std::log(10.0 * (1.0 + mu_) / tol) - std::log(-std::expm1(-mu_))) / mu_;
    if (!(n < kMaxGeometricTerms))
        throw NonConvergence("lambda/delta too small: geometric series would need more than 5e7 terms");
    ngeo_ = std::max(1L, static_cast<long>(std::ceil(n)));
    alt_.resize(ngeo_ + 1);
    ex_.resize(ngeo_ + 1);
    dex_.resize(ngeo_ + 1);
    for (long k = 0; k <= ngeo_; ++k) {
        const double e = std::exp(-mu_ * static_cast<double>(k));
        ex_[k] = e;
        alt_[k] = (k % 2 ? -e : e);
        dex_[k] = -mu_ * e;
    }
    pole_ = kind == Kind::TwoSided ? eval_b(mu_) - 0.5 * p.c : eval_B(-mu_) - p.c;
}

cplx BaseApproximant::geometric_part(cplx w, const blocks::NodeFrame& f) const {
    const long hi = ngeo_ + 1;
    const bool node_inside = f.n0 >= 1 && f.n0 <= ngeo_;
    if (kind_ == Kind::TwoSided) {
        cplx r = f.s * kernels::sum_simple_skip(alt_.data(), 1, hi, f.n0, w);
        if (node_inside) r += ex_[f.n0] * sinc(f.u);
        return r;
    }
    cplx r = f.s2 * kernels::sum_paired_skip(ex_.data(), dex_.data(), 1, hi, f.n0, w);
    if (node_inside) r += sq(sinc(f.u)) * (ex_[f.n0] + dex_[f.n0] * f.u);
    return r;
}

cplx BaseApproximant::series_part(cplx w) const {
    const auto f = blocks::frame(w);
    if (kind_ == Kind::TwoSided) return geometric_part(w, f) - p_.c * blocks::A1(w, f);
    return geometric_part(w, f) - p_.c * blocks::A2(w, f);
}

cplx BaseApproximant::eval_node(cplx w) const {
    const auto f = blocks::frame(w);
    switch (kind_) {
        case Kind::TwoSided: return geometric_part(w, f) - p_.c * blocks::A1(w, f) + pole_ * sinc(w);
        case Kind::Minorant: return geometric_part(w, f) - p_.c * blocks::A2(w, f) + pole_ * blocks::Q1(w);
        case Kind::Majorant:
            return geometric_part(w, f) - p_.c * blocks::A2(w, f) + pole_ * blocks::Q1(w) +
                   (1.0 - p_.c) * sq(sinc(w));
    }
    return 0.0;
}

Json BaseApproximant::describe() const {
    Json j;
    j["family"] = "base";
    j["kind"] = kind_name(kind_);
    j["lambda"] = p_.lambda;
    j["c"] = p_.c;
    j["delta"] = p_.delta;
    j["tol"] = tol_;
    return j;
}

StepApproximant::StepApproximant(Kind kind, double delta, double tol) : kind_(kind), delta_(delta), tol_(tol) {
    if (!(delta > 0)) throw ConstraintViolation("delta must be positive");
}

cplx StepApproximant::eval_node(cplx w) const {
    const auto f = blocks::frame(w);
    switch (kind_) {
        case Kind::TwoSided: return blocks::A1(w, f) + 0.5 * sinc(w);
        case Kind::Minorant: return blocks::A2(w, f) + blocks::Q1(w);
        case Kind::Majorant: return blocks::A2(w, f) + blocks::Q1(w) + sq(sinc(w));
    }
    return 0.0;
}

Json StepApproximant::describe() const {
    Json j;
    j["family"] = "step";
    j["kind"] = kind_name(kind_);
    j["delta"] = delta_;
    j["tol"] = tol_;
    return j;
}

double BaseTarget::derivative(double x) const {
    if (x > 0) return eval_T_prime(p_, x);
    if (x < 0) return 0.0;
    throw DomainError("target derivative undefined at the jump x = 0");
}

std::pair<double, double> BaseTarget::limits(double x) const {
    if (x == 0) return {0.0, 1.0 - p_.c};
    const double v = value(x);
    return {v, v};
}

Json BaseTarget::describe() const {
    Json j;
    j["target"] = "truncated-exponential";
    j["lambda"] = p_.lambda;
    j["c"] = p_.c;
    return j;
}

std::pair<double, double> StepTarget::limits(double x) const {
    if (x == 0) return {0.0, 1.0};
    const double v = value(x);
    return {v, v};
}

Json StepTarget::describe() const {
    Json j;
    j["target"] = "step";
    return j;
}

cplx eval_K(const BaseParams& p, cplx z) { return BaseApproximant(Kind::TwoSided, p)(z); }
cplx eval_L(const BaseParams& p, cplx z) { return BaseApproximant(Kind::Minorant, p)(z); }
cplx eval_M(const BaseParams& p, cplx z) { return BaseApproximant(Kind::Majorant, p)(z); }

double closed_form_error(Kind kind, const BaseParams& p) {
    validate(p, kind);
    const double mu = p.lambda / p.delta;
    switch (kind) {
        case Kind::TwoSided: return (std::tanh(0.5 * mu) / mu - 0.5 * p.c) / p.delta;
        case Kind::Minorant: return (q_function(mu) + 0.5 * (1.0 - p.c)) / p.delta;
        case Kind::Majorant: return (-q_function(mu) + 0.5 * (1.0 - p.c)) / p.delta;
    }
    return 0.0;
}

}  // namespace bsx
