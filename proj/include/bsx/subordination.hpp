#pragma once

#include "bsx/approximants.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace bsx {

enum class Growth { Min, Maj };

struct GrowthResult {
    bool finite = false;
    double value = 0.0;  // +inf when divergent
};

// Nonnegative measure on (0, inf): finite atoms, lambda^{-alpha} d lambda, or a tabulated density.
class Measure {
public:
    enum class Type { Atoms, Power, Table };
    struct Atom {
        double lambda;
        double weight;
    };

    static Measure atoms(std::vector<Atom> list);
    static Measure power(double alpha);
    // piecewise-linear density through (lambda[i], density[i]), zero outside the table
    static Measure table(std::vector<double> lambda, std::vector<double> density);
    static Measure load_table(const std::string& csv_path);
    // "power:alpha=<a>" | "atoms:<l1>:<w1>[,<l2>:<w2>...]" | "table:<path.csv>"
    static Measure parse(const std::string& spec);

    Type type() const { return type_; }
    double alpha() const { return alpha_; }
    const std::vector<Atom>& atom_list() const { return atoms_; }

    GrowthResult growth(Growth which) const { return which == Growth::Min ? min_ : maj_; }
    bool has_min() const { return min_.finite; }
    bool has_maj() const { return maj_.finite; }

    // integral of f against the measure; f(lambda) must be O(lambda) at 0 for power densities
    double integrate(const std::function<double(double)>& f, double tol = 1e-13) const;

    // T_nu(a; x) for real x; DomainError at x = 0 when unbounded
    double T(double a, double x) const;
    // j-th x-derivative, j >= 1, x > 0
    double T_derivative(int j, double a, double x) const;
    // analytic continuation to Re z > 0
    cplx T_complex(double a, cplx z) const;
    // integral of (1 - e^{-lambda}): the right limit of T(a; x) at 0 (a-independent); inf without maj growth
    double right_limit_at_zero() const;

    std::string spec() const { return spec_; }
    Json describe() const;

private:
    Measure() = default;
    void finish();
    double table_integral(const std::function<double(double)>& g, double tol) const;
    cplx table_integral_c(const std::function<cplx(double)>& g, double tol) const;

    Type type_ = Type::Atoms;
    double alpha_ = 0.0;
    std::vector<Atom> atoms_;
    std::vector<double> grid_, dens_;
    GrowthResult min_, maj_;
    std::string spec_;
};

GrowthResult check_growth(const Measure& m, Growth which);
double eval_Tnu(const Measure& m, double a, double x);
double eval_Tnu_prime(const Measure& m, double a, double x);
double coeff_K(const Measure& m, double a);
double coeff_L(const Measure& m, double a);
double coeff_M_extra(const Measure& m);
double closed_form_error_nu(Kind kind, const Measure& m, double delta);

// K_nu, L_nu, M_nu (a = 1/delta) evaluated at w = delta*z.
class SubordinatedApproximant final : public Approximant {
public:
    SubordinatedApproximant(Kind kind, std::shared_ptr<const Measure> m, double delta, double tol = kApproxTol);
    // skips the delta >= 1 requirement (growth conditions are still needed for the coefficients)
    SubordinatedApproximant(Kind kind, std::shared_ptr<const Measure> m, double delta, double tol, bool check_delta);

    Kind kind() const override { return kind_; }
    double delta() const override { return delta_; }
    double tol() const override { return tol_; }
    cplx operator()(cplx z) const override { return eval_node(delta_ * z); }
    Json describe() const override;

    cplx eval_node(cplx w) const;
    // interpolation series over n >= 1 without the pole terms
    cplx series_part(cplx w) const;
    const Measure& measure() const { return *m_; }

private:
    cplx series(cplx w, const blocks::NodeFrame& f) const;
    // T^{(j)}(a; N), j = 0..kTailDerivs-1
    void tail_derivs(long N, double* out) const;
    double node_value(long n) const;
    double node_slope(long n) const;

    Kind kind_;
    std::shared_ptr<const Measure> m_;
    double delta_, a_, tol_;
    double pole_ = 0.0, extra_ = 0.0;
    long cap_ = 0;
    std::vector<double> val_, der_, alt_;
    mutable std::mutex cache_mu_;
    mutable std::map<long, std::vector<double>> tail_cache_;
};

class MeasureTarget final : public Target {
public:
    explicit MeasureTarget(std::shared_ptr<const Measure> m) : m_(std::move(m)) {}
    double value(double x) const override { return m_->T(1.0, x); }
    double derivative(double x) const override;
    std::pair<double, double> limits(double x) const override;
    bool singular_at_zero() const override { return m_->type() != Measure::Type::Atoms; }
    Json describe() const override;

private:
    std::shared_ptr<const Measure> m_;
};

cplx eval_Knu(const SubordinatedApproximant& h, cplx z);
cplx eval_Lnu(const SubordinatedApproximant& h, cplx z);
cplx eval_Mnu(const SubordinatedApproximant& h, cplx z);

}  // namespace bsx
