#pragma once

#include "bsx/subordination.hpp"

#include <memory>

namespace bsx {

// x -> T(x) - T(-x) for a truncated target T.
class OddTarget final : public Target {
public:
    explicit OddTarget(std::shared_ptr<const Target> base) : base_(std::move(base)) {}
    double value(double x) const override;
    double derivative(double x) const override;
    std::pair<double, double> limits(double x) const override;
    bool singular_at_zero() const override { return base_->singular_at_zero(); }
    Json describe() const override;

private:
    std::shared_ptr<const Target> base_;
};

// z -> plus(z) - minus(-z). Both parts must share delta.
class OddApproximant final : public Approximant {
public:
    OddApproximant(Kind kind, std::shared_ptr<const Approximant> plus, std::shared_ptr<const Approximant> minus);
    Kind kind() const override { return kind_; }
    double delta() const override { return plus_->delta(); }
    double tol() const override { return std::max(plus_->tol(), minus_->tol()); }
    cplx operator()(cplx z) const override { return (*plus_)(z) - (*minus_)(-z); }
    Json describe() const override;

private:
    Kind kind_;
    std::shared_ptr<const Approximant> plus_, minus_;
};

// K~ = K(z) - K(-z), L~ = L(z) - M(-z), M~ = M(z) - L(-z). All three need c <= e^{-lambda/delta}.
OddApproximant make_odd(Kind kind, const BaseParams& p, double tol = kApproxTol);
// Measure version; L~ and M~ need the majorant growth condition (both halves are used).
OddApproximant make_odd(Kind kind, std::shared_ptr<const Measure> m, double delta, double tol = kApproxTol);

double eval_T_odd(const BaseParams& p, double x);
double eval_T_odd(const Measure& m, double x);

cplx eval_K_odd(const BaseParams& p, cplx z);
cplx eval_L_odd(const BaseParams& p, cplx z);
cplx eval_M_odd(const BaseParams& p, cplx z);

}  // namespace bsx
