#include "bsx/base_functions.hpp"

#include "bsx/errors.hpp"

#include <cmath>
#include <sstream>

namespace bsx {

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::TwoSided: return "two-sided";
        case Kind::Minorant: return "minorant";
        case Kind::Majorant: return "majorant";
    }
    return "?";
}

double auto_shift(double lambda, double delta) { return std::exp(-lambda / delta); }

void validate(const BaseParams& p, Kind kind) {
    auto fmt = [](double v) {
        std::ostringstream os;
        os.precision(17);
        os << v;
        return os.str();
    };
    if (!(p.lambda > 0) || !std::isfinite(p.lambda))
        throw ConstraintViolation("lambda must be a positive finite number, got " + fmt(p.lambda));
    if (!(p.delta > 0) || !std::isfinite(p.delta))
        throw ConstraintViolation("delta must be a positive finite number, got " + fmt(p.delta));
    if (!(p.a > 0) || !std::isfinite(p.a)) throw ConstraintViolation("a must be positive, got " + fmt(p.a));
    if (!std::isfinite(p.c)) throw ConstraintViolation("c must be finite");
    if (kind == Kind::Majorant) {
        if (p.c > 1.0) throw ConstraintViolation("c = " + fmt(p.c) + " violates the majorant constraint c <= 1");
    } else {
        const double cmax = auto_shift(p.lambda, p.delta);
        if (p.c > cmax)
            throw ConstraintViolation("c = " + fmt(p.c) + " violates the " + kind_name(kind) +
                                      " constraint c <= exp(-lambda/delta) = " + fmt(cmax));
    }
}

double eval_b(double w) {
    if (w > 0) {
        const double e = std::exp(-w);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(w));
}

double eval_B_minus_one(double w) {
    if (std::abs(w) < 1e-2) {
        const double w2 = w * w;
        return w / 2 + w2 / 12 - w2 * w2 / 720 + w2 * w2 * w2 / 30240 - w2 * w2 * w2 * w2 / 1209600;
    }
    return w / (-std::expm1(-w)) - 1.0;
}

double eval_B(double w) {
    if (std::abs(w) < 1e-2) return 1.0 + eval_B_minus_one(w);
    return w / (-std::expm1(-w));
}

double eval_B_second(double w) {
    const double x = std::abs(w);  // B'' is even since B(w) - B(-w) = w
    if (x < 1.0) {
        // sum_k B_{2k} x^{2k-2} / (2k-2)!
        double s = 0.0, pw = 1.0, fact = 1.0;
        for (int k = 1; k <= 15; ++k) {
            s += bernoulli_even(k) * pw / fact;
            pw *= x * x;
            fact *= (2.0 * k - 1) * (2.0 * k);
        }
        return s;
    }
    const double em = -std::expm1(-x);
    return x * std::exp(-x) / (em * em) * (1.0 / std::tanh(0.5 * x) - 2.0 / x);
}

double eval_T(const BaseParams& p, double x) {
    if (x > 0) return std::exp(-p.lambda * x) - p.c;
    if (x == 0) return 0.5 * (1.0 - p.c);
    return 0.0;
}

double eval_T_prime(const BaseParams& p, double x) {
    if (!(x > 0)) throw DomainError("eval_T_prime: derivative requires x > 0");
    return -p.lambda * std::exp(-p.lambda * x);
}

double eval_E0(double x) {
    if (x > 0) return 1.0;
    if (x == 0) return 0.5;
    return 0.0;
}

cplx eval_T_complex(double lambda, double a, cplx z) {
    if (z.real() > 0) return std::exp(-a * lambda * z) - std::exp(-lambda);
    if (z.real() == 0) return 0.5 * (1.0 - std::exp(-lambda));
    return 0.0;
}

}  // namespace bsx
