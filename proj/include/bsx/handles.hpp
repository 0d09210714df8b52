#pragma once

#include "bsx/base_functions.hpp"

#include <json.hpp>

#include <utility>

namespace bsx {

using Json = nlohmann::ordered_json;

// An entire function of exponential type type_multiplier(kind)*pi*delta, evaluated in the physical variable.
class Approximant {
public:
    virtual ~Approximant() = default;
    virtual Kind kind() const = 0;
    virtual double delta() const = 0;
    virtual double tol() const = 0;
    virtual cplx operator()(cplx z) const = 0;
    double at(double x) const { return (*this)(cplx(x, 0.0)).real(); }
    virtual Json describe() const = 0;
};

// The real target being approximated.
class Target {
public:
    virtual ~Target() = default;
    virtual double value(double x) const = 0;
    virtual double derivative(double x) const = 0;
    // (left, right) limits at x; they differ only at the jump x = 0.
    virtual std::pair<double, double> limits(double x) const {
        const double v = value(x);
        return {v, v};
    }
    // true if the target is unbounded or non-smooth enough near 0 to need endpoint-robust quadrature
    virtual bool singular_at_zero() const { return false; }
    virtual Json describe() const = 0;
};

}  // namespace bsx
