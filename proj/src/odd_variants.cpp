#include "bsx/odd_variants.hpp"

#include "bsx/errors.hpp"

#include <cmath>

namespace bsx {

double OddTarget::value(double x) const {
    if (x == 0) {
        const auto lim = base_->limits(0.0);
        if (!std::isfinite(lim.second)) throw DomainError("odd target is unbounded at x = 0");
        return 0.0;
    }
    return base_->value(x) - base_->value(-x);
}

double OddTarget::derivative(double x) const {
    if (x == 0) throw DomainError("odd target derivative undefined at the jump x = 0");
    return base_->derivative(x) + base_->derivative(-x);
}

std::pair<double, double> OddTarget::limits(double x) const {
    const auto p = base_->limits(x);
    const auto m = base_->limits(-x);
    return {p.first - m.second, p.second - m.first};
}

Json OddTarget::describe() const {
    Json j;
    j["target"] = "odd";
    j["base"] = base_->describe();
    return j;
}

OddApproximant::OddApproximant(Kind kind, std::shared_ptr<const Approximant> plus,
                               std::shared_ptr<const Approximant> minus)
    : kind_(kind), plus_(std::move(plus)), minus_(std::move(minus)) {
    if (!plus_ || !minus_) throw DomainError("odd approximant needs two handles");
    if (plus_->delta() != minus_->delta()) throw DomainError("odd approximant halves must share delta");
}

Json OddApproximant::describe() const {
    Json j;
    j["family"] = "odd";
    j["kind"] = kind_name(kind_);
    j["plus"] = plus_->describe();
    j["minus"] = minus_->describe();
    return j;
}

namespace {
Kind partner(Kind k) {
    switch (k) {
        case Kind::Minorant: return Kind::Majorant;
        case Kind::Majorant: return Kind::Minorant;
        default: return k;
    }
}
}  // namespace

OddApproximant make_odd(Kind kind, const BaseParams& p, double tol) {
    // the stricter of the two constraints applies to every odd kind
    validate(p, Kind::Minorant);
    auto plus = std::make_shared<BaseApproximant>(kind, p, tol);
    auto minus = std::make_shared<BaseApproximant>(partner(kind), p, tol);
    return OddApproximant(kind, plus, minus);
}

OddApproximant make_odd(Kind kind, std::shared_ptr<const Measure> m, double delta, double tol) {
    if (!m) throw DomainError("measure handle is null");
    if (kind != Kind::TwoSided && !m->has_maj())
        throw ConstraintViolation("odd one-sided approximants need the growth condition int lambda/(1+lambda) dnu < inf, "
                                  "which fails for " +
                                  m->spec());
    auto plus = std::make_shared<SubordinatedApproximant>(kind, m, delta, tol);
    auto minus = std::make_shared<SubordinatedApproximant>(partner(kind), m, delta, tol);
    return OddApproximant(kind, plus, minus);
}

double eval_T_odd(const BaseParams& p, double x) { return OddTarget(std::make_shared<BaseTarget>(p)).value(x); }

double eval_T_odd(const Measure& m, double x) {
    if (x == 0) {
        if (!std::isfinite(m.right_limit_at_zero())) throw DomainError("odd target is unbounded at x = 0");
        return 0.0;
    }
    return x > 0 ? m.T(1.0, x) : -m.T(1.0, -x);
}

cplx eval_K_odd(const BaseParams& p, cplx z) { return make_odd(Kind::TwoSided, p)(z); }
cplx eval_L_odd(const BaseParams& p, cplx z) { return make_odd(Kind::Minorant, p)(z); }
cplx eval_M_odd(const BaseParams& p, cplx z) { return make_odd(Kind::Majorant, p)(z); }

}  // namespace bsx
