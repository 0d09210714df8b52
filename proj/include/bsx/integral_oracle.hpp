#pragma once

#include "bsx/subordination.hpp"

#include <memory>

namespace bsx {

// Independent references: the real-line integral representations of K_lambda - E_lambda and
// M_lambda - E_lambda (delta = 1, c = 0) and the vertical-line contour identity.

// K_lambda(x) - E_lambda(x) from the Laplace-type representation. Exactly 0 at integers; DomainError at x = 0.
double oracle_K_diff(double lambda, double x, double tol = 1e-12);
// M_lambda(x) - E_lambda(x), same conventions.
double oracle_M_diff(double lambda, double x, double tol = 1e-12);

// e^{-lambda} g(lambda, w) with g(lambda, w) = e^lambda b(lambda+w) - e^lambda b(lambda) - b(w) + b(0);
// nonpositive for lambda, w >= 0.
double kl_sign_integrand(double lambda, double w);
// e^lambda B(lambda+w) - e^lambda B(lambda) - B(w) + 1 - w(e^lambda - 1); nonpositive for lambda, w >= 0.
double ml_sign_integrand(double lambda, double w);

// Phi analytic on Re w > 0 together with its interpolation series F_k (sum over n >= 1, no pole terms).
class ContourTarget {
public:
    // Phi(w) = e^{-a lambda w} - e^{-lambda}
    static ContourTarget shifted_exponential(double lambda, double a);
    // Phi(w) = T_nu(a; w)
    static ContourTarget subordinated(std::shared_ptr<const Measure> m, double a);

    cplx value(cplx w) const;
    // F_k(Phi; z), k = 1 or 2
    cplx series(int k, cplx z) const;
    // |(sin pi w)^{-k} Phi(w)| decays at least like exp(-envelope_rate(k) |Im w|) on vertical lines
    double envelope_rate(int k) const { return k * kPi; }

private:
    ContourTarget() = default;
    double lambda_ = 1.0, a_ = 1.0;
    std::shared_ptr<const Measure> m_;
    std::shared_ptr<const BaseApproximant> base1_, base2_;
    std::shared_ptr<const SubordinatedApproximant> sub1_, sub2_;
};

// I_k(beta, Phi; z) = (2 pi i)^{-1} int_{Re w = beta} (sin pi z / sin pi w)^k Phi(w)/(z - w) dw.
QuadResultC eval_I_k(int k, double beta, const ContourTarget& phi, cplx z, double tol = 1e-11);

// B(beta, Phi) = 2^{k-1}/pi int |Phi(beta+iv)/(beta+iv)| e^{-k pi |v|} dv
double contour_B(int k, double beta, const ContourTarget& phi, double tol = 1e-10);
// B |csc pi beta|^k (1 + |z|/|x - beta|) e^{k pi |y|}
double contour_bound(int k, double beta, const ContourTarget& phi, cplx z, double tol = 1e-10);

}  // namespace bsx
