#pragma once

#include "bsx/handles.hpp"
#include "bsx/series_blocks.hpp"

#include <vector>

namespace bsx {

constexpr double kApproxTol = 1e-11;

// K_{mu,c}, L_{mu,c}, M_{mu,c} with mu = lambda/delta, evaluated at w = delta*z.
class BaseApproximant final : public Approximant {
public:
    BaseApproximant(Kind kind, const BaseParams& p, double tol = kApproxTol);
    // skips the constraints on c; the series still converges (used by the contour oracle)
    static BaseApproximant unchecked(Kind kind, const BaseParams& p, double tol = kApproxTol);

    Kind kind() const override { return kind_; }
    double delta() const override { return p_.delta; }
    double tol() const override { return tol_; }
    const BaseParams& params() const { return p_; }
    cplx operator()(cplx z) const override { return eval_node(p_.delta * z); }
    Json describe() const override;

    // value as a function of the node variable w = delta*z
    cplx eval_node(cplx w) const;
    // the interpolation series alone: sum over n >= 1 only, no 1/w pole terms
    cplx series_part(cplx w) const;
    long truncation() const { return ngeo_; }

private:
    BaseApproximant(Kind kind, const BaseParams& p, double tol, bool check);
    cplx geometric_part(cplx w, const blocks::NodeFrame& f) const;

    Kind kind_;
    BaseParams p_;
    double tol_;
    double mu_;
    long ngeo_;
    double pole_;  // b(mu)-c/2 for K, mu/(e^mu-1)-c for L and M
    std::vector<double> alt_;  // (-1)^n e^{-mu n}
    std::vector<double> ex_;   // e^{-mu n}
    std::vector<double> dex_;  // -mu e^{-mu n}
};

// K_0, L_0, M_0: the extremal functions of the step E_0 (type pi resp. 2pi), scaled by delta.
class StepApproximant final : public Approximant {
public:
    StepApproximant(Kind kind, double delta, double tol = kApproxTol);
    Kind kind() const override { return kind_; }
    double delta() const override { return delta_; }
    double tol() const override { return tol_; }
    cplx operator()(cplx z) const override { return eval_node(delta_ * z); }
    cplx eval_node(cplx w) const;
    Json describe() const override;

private:
    Kind kind_;
    double delta_;
    double tol_;
};

class BaseTarget final : public Target {
public:
    explicit BaseTarget(const BaseParams& p) : p_(p) {}
    double value(double x) const override { return eval_T(p_, x); }
    double derivative(double x) const override;
    std::pair<double, double> limits(double x) const override;
    Json describe() const override;

private:
    BaseParams p_;
};

class StepTarget final : public Target {
public:
    double value(double x) const override { return eval_E0(x); }
    double derivative(double) const override { return 0.0; }
    std::pair<double, double> limits(double x) const override;
    Json describe() const override;
};

cplx eval_K(const BaseParams& p, cplx z);
cplx eval_L(const BaseParams& p, cplx z);
cplx eval_M(const BaseParams& p, cplx z);

double closed_form_error(Kind kind, const BaseParams& p);

// 1/mu - 1/(e^mu - 1) - 1/2, accurate for small mu
double q_function(double mu);

}  // namespace bsx
