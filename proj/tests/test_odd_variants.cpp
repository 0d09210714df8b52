#include "bsx/errors.hpp"
#include "bsx/odd_variants.hpp"
#include "bsx/verification.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

using namespace bsx;

TEST_CASE("odd target") {
    const BaseParams p{1.0, std::exp(-1.0), 1.0, 1.0};
    CHECK(eval_T_odd(p, 0.0) == 0.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-6, 6);
    for (int i = 0; i < 20; ++i) {
        const double x = u(rng);
        CHECK(eval_T_odd(p, x) == doctest::Approx(-eval_T_odd(p, -x)));
        CHECK(eval_T_odd(p, x) == doctest::Approx(eval_T(p, x) - eval_T(p, -x)));
    }
    OddTarget t(std::make_shared<BaseTarget>(p));
    CHECK(t.limits(0.0).first == doctest::Approx(-(1 - p.c)));
    CHECK(t.limits(0.0).second == doctest::Approx(1 - p.c));
    CHECK(t.derivative(0.7) == doctest::Approx(eval_T_prime(p, 0.7)));
    const auto log = Measure::power(1.0);
    CHECK(eval_T_odd(log, 2.0) == doctest::Approx(-std::log(2.0)));
    OddTarget tl(std::make_shared<MeasureTarget>(std::make_shared<Measure>(log)));
    CHECK_THROWS_AS(tl.value(0.0), DomainError);
}

TEST_CASE("odd approximants") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> re(-6, 6), im(-2, 2);
    for (double delta : {1.0, 2.0}) {
        const BaseParams p{1.0, auto_shift(1.0, delta), delta, 1.0};
        for (int i = 0; i < 20; ++i) {
            const cplx z(re(rng), im(rng));
            CHECK(std::abs(eval_K_odd(p, z) + eval_K_odd(p, -z)) < 1e-10);
            CHECK(std::abs(eval_L_odd(p, z) + eval_M_odd(p, -z)) < 1e-10);
            const double x = z.real();
            const double t = eval_T_odd(p, x);
            CHECK(eval_L_odd(p, x).real() <= t + 1e-9);
            CHECK(t <= eval_M_odd(p, x).real() + 1e-9);
        }
    }
}

TEST_CASE("odd certificates") {
    const BaseParams p{1.0, std::exp(-1.0), 1.0, 1.0};
    auto t = std::make_shared<OddTarget>(std::make_shared<BaseTarget>(p));
    const auto g = GridSpec::parse("-10:10:20000:refined");
    CHECK(verify_sign_two_sided(make_odd(Kind::TwoSided, p), *t, g).passed);
    CHECK(verify_one_sided(make_odd(Kind::Minorant, p), *t, Kind::Minorant, g).passed);
    CHECK(verify_one_sided(make_odd(Kind::Majorant, p), *t, Kind::Majorant, g).passed);
}

TEST_CASE("odd constraints") {
    // the majorant half of L~ needs c <= exp(-lambda/delta) as well
    CHECK_THROWS_AS(make_odd(Kind::Minorant, BaseParams{1.0, 0.5, 1.0, 1.0}), ConstraintViolation);
    CHECK_THROWS_AS(make_odd(Kind::Majorant, BaseParams{1.0, 0.5, 1.0, 1.0}), ConstraintViolation);
    auto log = std::make_shared<const Measure>(Measure::power(1.0));
    CHECK_NOTHROW(make_odd(Kind::TwoSided, log, 1.0));
    CHECK_THROWS_AS(make_odd(Kind::Minorant, log, 1.0), ConstraintViolation);
    CHECK_THROWS_AS(make_odd(Kind::Majorant, log, 1.0), ConstraintViolation);
    auto m = std::make_shared<const Measure>(Measure::power(1.5));
    auto L = make_odd(Kind::Minorant, m, 1.0);
    auto M = make_odd(Kind::Majorant, m, 1.0);
    for (double x : {-3.3, -0.4, 0.6, 2.2}) {
        CHECK(L.at(x) <= eval_T_odd(*m, x) + 1e-9);
        CHECK(M.at(x) >= eval_T_odd(*m, x) - 1e-9);
    }
    CHECK_THROWS_AS(OddApproximant(Kind::TwoSided, std::make_shared<BaseApproximant>(Kind::TwoSided, BaseParams{1, 0, 1, 1}),
                                   std::make_shared<BaseApproximant>(Kind::TwoSided, BaseParams{1, 0, 2, 1})),
                    DomainError);
}
