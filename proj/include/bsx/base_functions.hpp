#pragma once

#include "bsx/numerics.hpp"

#include <string>

namespace bsx {

// Which extremal problem: best two-sided (K), minorant (L), majorant (M).
enum class Kind { TwoSided, Minorant, Majorant };

std::string kind_name(Kind k);
// type multiplier k: entire functions of type k*pi*delta
inline int type_multiplier(Kind k) { return k == Kind::TwoSided ? 1 : 2; }

struct BaseParams {
    double lambda = 1.0;
    double c = 0.0;
    double delta = 1.0;
    double a = 1.0;
};

// e^{-lambda/delta}, the value "auto" resolves to.
double auto_shift(double lambda, double delta);

// Throws ConstraintViolation when params are outside the admissible range for kind.
void validate(const BaseParams& p, Kind kind);

double eval_b(double w);
double eval_B(double w);
// B(w) - 1 without cancellation near 0.
double eval_B_minus_one(double w);
double eval_B_second(double w);

double eval_T(const BaseParams& p, double x);
double eval_T_prime(const BaseParams& p, double x);
// Heaviside step with E0(0) = 1/2.
double eval_E0(double x);

// Half-plane target e^{-a lambda z} - e^{-lambda} (Re z > 0), midpoint on Re z = 0, 0 on the left.
cplx eval_T_complex(double lambda, double a, cplx z);

}  // namespace bsx
