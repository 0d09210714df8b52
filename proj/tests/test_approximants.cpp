#include "bsx/approximants.hpp"
#include "bsx/errors.hpp"
#include "series_oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace bsx;

namespace {

cplx brute(Kind k, const BaseParams& p, cplx z) {
    const long double mu = p.lambda / p.delta;
    const oracle::lcplx w((long double)(p.delta * z.real()), (long double)(p.delta * z.imag()));
    oracle::lcplx v = k == Kind::TwoSided  ? oracle::K(mu, p.c, w)
                      : k == Kind::Minorant ? oracle::L(mu, p.c, w)
                                            : oracle::M(mu, p.c, w);
    return {double(v.real()), double(v.imag())};
}

double close(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

const double e1 = std::exp(-1.0);

}  // namespace

TEST_CASE("series against the brute-force sums") {
    const std::vector<BaseParams> ps = {{1, e1, 1, 1}, {1, 0, 1, 1}, {0.1, 0.9, 2, 1}, {5, 0.0067, 1, 1},
                                        {1, std::exp(-0.5), 2, 1}, {3, -0.4, 1, 1}};
    const std::vector<cplx> zs = {0.5, -0.5, {2.3, 1}, {-1.7, 0.4}, {0.3, -2}, 7.45, -12.6};
    for (const auto& p : ps)
        for (Kind k : {Kind::TwoSided, Kind::Minorant, Kind::Majorant}) {
            BaseApproximant a(k, p);
            for (cplx z : zs) {
                // nodes are at n/delta; the oracle wants distance >= 0.1 in w
                const double dist = std::abs(p.delta * z.real() - std::round(p.delta * z.real()));
                if (dist < 0.1 && std::abs(z.imag()) < 0.1) continue;
                CAPTURE(kind_name(k));
                CAPTURE(p.lambda);
                CAPTURE(p.c);
                CAPTURE(p.delta);
                CAPTURE(z);
                CHECK(close(a(z), brute(k, p, z)) < 1e-9);
            }
        }
}

TEST_CASE("frozen values at lambda = 1, c = exp(-1)") {
    // long double direct sums (series_oracle.hpp) and mpmath (trigamma form for L, M) agree on these
    const BaseParams p{1, e1, 1, 1};
    CHECK(eval_K(p, 0.5).real() == doctest::Approx(0.080694741219252075).epsilon(1e-13));
    CHECK(eval_K(p, -0.5).real() == doctest::Approx(0.040008185525600447).epsilon(1e-13));
    CHECK(eval_K(p, 0.0).real() == doctest::Approx(0.085001700784273937).epsilon(1e-13));
    CHECK(eval_L(p, 0.5).real() == doctest::Approx(0.102095253980862127).epsilon(1e-13));
    CHECK(eval_M(p, 0.5).real() == doctest::Approx(0.358284066881524004).epsilon(1e-13));
    CHECK(std::abs(eval_M(p, cplx(2.3, 1)) - cplx(0.536722700536841569, 0.348218181212730102)) < 1e-12);
    CHECK(std::abs(eval_K(p, cplx(2.3, 1)) - cplx(-0.390521929276816325, -0.0642252677016177161)) < 1e-12);
    const BaseParams p0{1, 0, 1, 1};
    CHECK(eval_K(p0, 0.5).real() - std::exp(-0.5) == doctest::Approx(-0.224796534859022646).epsilon(1e-12));
}

TEST_CASE("interpolation at the nodes") {
    for (double delta : {1.0, 2.0}) {
        const BaseParams p{1.3, auto_shift(1.3, delta), delta, 1};
        BaseApproximant K(Kind::TwoSided, p), L(Kind::Minorant, p), M(Kind::Majorant, p);
        for (int n = -12; n <= 12; ++n) {
            if (n == 0) continue;
            const double x = n / delta;
            CHECK(K.at(x) == doctest::Approx(eval_T(p, x)).epsilon(1e-12).scale(1));
            CHECK(L.at(x) == doctest::Approx(eval_T(p, x)).epsilon(1e-12).scale(1));
            CHECK(M.at(x) == doctest::Approx(eval_T(p, x)).epsilon(1e-12).scale(1));
            if (n > 0) {
                const double h = 1e-5;
                auto d = [&](const BaseApproximant& a) {
                    return (-a.at(x + 2 * h) + 8 * a.at(x + h) - 8 * a.at(x - h) + a.at(x - 2 * h)) / (12 * h);
                };
                CHECK(d(L) == doctest::Approx(eval_T_prime(p, x)).epsilon(1e-7).scale(1));
                CHECK(d(M) == doctest::Approx(eval_T_prime(p, x)).epsilon(1e-7).scale(1));
            }
        }
    }
}

TEST_CASE("values at zero are the series limits") {
    for (double lam : {0.1, 1.0, 5.0}) {
        const double c = auto_shift(lam, 1.0);
        const BaseParams p{lam, c, 1, 1};
        const double b = 1.0 / (std::exp(lam) + 1.0);
        CHECK(eval_K(p, 0.0).real() == doctest::Approx(b - c / 2).epsilon(1e-13));
        CHECK(std::abs(eval_L(p, 0.0)) < 1e-14);
        CHECK(eval_M(p, 0.0).real() == doctest::Approx(1 - c).epsilon(1e-13));
        // Richardson on z = +-1e-5, +-1e-6 agrees with the value at 0
        auto sym = [&](double h) { return 0.5 * (eval_K(p, h).real() + eval_K(p, -h).real()); };
        CHECK((100 * sym(1e-6) - sym(1e-5)) / 99 == doctest::Approx(b - c / 2).epsilon(1e-9));
    }
}

TEST_CASE("M - L = (1-c) sinc^2") {
    for (double c : {std::exp(-2.0), 0.5, 1.0, -1.0}) {
        const BaseParams p{2, c, 1.5, 1};
        for (cplx z : {cplx(0.1, 0.2), cplx(-3.7, 1.1), cplx(9.2, -0.4)}) {
            const cplx s = sinc(1.5 * z);
            CHECK(std::abs(eval_M(p, z) - BaseApproximant(Kind::Majorant, p)(z)) == 0.0);
            if (c <= std::exp(-2.0 / 1.5))
                CHECK(std::abs(eval_M(p, z) - eval_L(p, z) - (1 - c) * s * s) < 1e-12);
        }
    }
}

TEST_CASE("linear in c through the step functions") {
    const double lam = 0.8, delta = 1.0;
    const double ca = auto_shift(lam, delta), cb = -0.7;
    for (Kind k : {Kind::TwoSided, Kind::Minorant, Kind::Majorant}) {
        BaseApproximant A(k, {lam, ca, delta, 1}), B(k, {lam, cb, delta, 1});
        StepApproximant S(k, delta);
        for (cplx z : {cplx(0.5), cplx(-2.3, 0.6), cplx(4.01, -1.0)})
            CHECK(std::abs(B(z) - (A(z) + (ca - cb) * S(z))) < 1e-12 * (1 + std::abs(B(z))));
    }
}

TEST_CASE("step approximants") {
    StepApproximant K0(Kind::TwoSided, 1), L0(Kind::Minorant, 1), M0(Kind::Majorant, 1);
    CHECK(K0.at(0.0) == doctest::Approx(0.5));
    CHECK(L0.at(0.0) == doctest::Approx(0.0).scale(1));
    CHECK(M0.at(0.0) == doctest::Approx(1.0));
    for (int n : {-3, -1, 1, 4}) {
        CHECK(K0.at(n) == doctest::Approx(eval_E0(n)).scale(1));
        CHECK(L0.at(n) == doctest::Approx(eval_E0(n)).scale(1));
    }
    CHECK(L0.at(-0.5) <= 1e-15);
    CHECK(M0.at(-0.5) >= 0.0);
    CHECK_THROWS_AS(StepApproximant(Kind::TwoSided, 0.0), ConstraintViolation);
}

TEST_CASE("closed-form errors") {
    for (double lam : {0.1, 1.0, 5.0})
        for (double delta : {1.0, 2.0})
            for (double c : {auto_shift(lam, delta), 0.0, -0.5}) {
                const BaseParams p{lam, c, delta, 1};
                const double mu = lam / delta;
                const double k = ((1 - std::exp(-mu)) / (mu * (1 + std::exp(-mu))) - c / 2) / delta;
                const double l = (1 / mu - c / 2 - 1 / std::expm1(mu)) / delta;
                const double m = (1 / (1 - std::exp(-mu)) - 1 / mu - c / 2) / delta;
                CHECK(closed_form_error(Kind::TwoSided, p) == doctest::Approx(k).epsilon(1e-12));
                CHECK(closed_form_error(Kind::Minorant, p) == doctest::Approx(l).epsilon(1e-10));
                CHECK(closed_form_error(Kind::Majorant, p) == doctest::Approx(m).epsilon(1e-10));
                CHECK(std::abs(closed_form_error(Kind::Minorant, p) + closed_form_error(Kind::Majorant, p) -
                               (1 - c) / delta) < 1e-14);
            }
    const BaseParams p{1, e1, 1, 1};
    CHECK(closed_form_error(Kind::TwoSided, p) == doctest::Approx(std::tanh(0.5) - e1 / 2).epsilon(1e-15));
    CHECK(closed_form_error(Kind::TwoSided, p) == doctest::Approx(0.27817743667428857).epsilon(1e-15));
    CHECK(closed_form_error(Kind::Minorant, p) == doctest::Approx(0.23408357254495238).epsilon(1e-15));
    CHECK(closed_form_error(Kind::Majorant, p) == doctest::Approx(0.39803698628360529).epsilon(1e-15));
    CHECK_THROWS_AS(closed_form_error(Kind::TwoSided, {1, 0.9, 1, 1}), ConstraintViolation);
}

TEST_CASE("q_function near zero") {
    for (double mu : {1e-8, 1e-4, 0.3, 1.0, 1.0000001, 3.0, 40.0}) {
        const double direct = 1 / mu - 1 / std::expm1(mu) - 0.5;
        const double series = -mu / 12 + mu * mu * mu / 720;
        CHECK(q_function(mu) == doctest::Approx(mu < 1e-3 ? series : direct).epsilon(1e-9));
    }
}

TEST_CASE("construction rejects bad parameters") {
    CHECK_THROWS_AS(BaseApproximant(Kind::TwoSided, {1, 0.9, 1, 1}), ConstraintViolation);
    CHECK_THROWS_AS(BaseApproximant(Kind::Majorant, {1, 1.01, 1, 1}), ConstraintViolation);
    CHECK_NOTHROW(BaseApproximant::unchecked(Kind::TwoSided, {1, 0.9, 1, 1}));
    BaseApproximant a(Kind::Majorant, {1, 1.0, 2, 1});
    CHECK(a.describe()["kind"] == "majorant");
    CHECK(a.delta() == 2.0);
}

TEST_CASE("conjugate symmetry and growth on the imaginary axis") {
    const BaseParams p{1, e1, 1, 1};
    BaseApproximant K(Kind::TwoSided, p), M(Kind::Majorant, p);
    const cplx z(1.3, 2.2);
    CHECK(std::abs(K(std::conj(z)) - std::conj(K(z))) < 1e-13 * std::abs(K(z)));
    for (double y : {2.0, 5.0, 10.0, 20.0}) {
        CHECK(std::log(std::abs(K(cplx(0, y)))) - std::log(1 + y) <= kPi * y + 1.0);
        CHECK(std::log(std::abs(M(cplx(0, y)))) - std::log(1 + y) <= 2 * kPi * y + 1.0);
    }
}
