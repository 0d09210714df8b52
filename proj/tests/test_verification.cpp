#include "bsx/approximants.hpp"
#include "bsx/errors.hpp"
#include "bsx/subordination.hpp"
#include "bsx/verification.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>

using namespace bsx;

TEST_CASE("grid grammar") {
    const auto g = GridSpec::parse("-5:5:101");
    REQUIRE(g.pieces.size() == 1);
    CHECK(g.pieces[0].spacing == Spacing::Uniform);
    CHECK(GridSpec::parse(g.text()).text() == g.text());
    const auto x = make_grid(g);
    CHECK(x.size() == 101);
    CHECK(x.front() == -5.0);
    CHECK(x.back() == 5.0);
    CHECK(std::is_sorted(x.begin(), x.end()));

    const auto lg = make_grid(GridSpec::parse("0.01:50:200:log"));
    CHECK(lg.size() == 200);
    CHECK(lg.front() == doctest::Approx(0.01));
    CHECK(lg.back() == doctest::Approx(50.0));
    CHECK(lg[1] / lg[0] == doctest::Approx(lg[2] / lg[1]));

    const auto two = GridSpec::parse("1e-6:30:50:log+-30:-1e-6:50:log");
    CHECK(two.pieces.size() == 2);
    const auto tx = make_grid(two);
    CHECK(tx.size() == 100);
    CHECK(std::count_if(tx.begin(), tx.end(), [](double v) { return v < 0; }) == 50);

    const auto ch = make_grid(GridSpec::parse("-1:1:9:chebyshev"));
    CHECK(ch.size() == 9);
    CHECK(ch.front() == -1.0);
    CHECK(ch.back() == 1.0);

    for (const char* bad : {"", "1:2", "a:2:3", "1:2:0", "2:1:5", "1:2:3:fancy", "-1:1:5:log", "0:1:5:log", "1:2:3.5"})
        CHECK_THROWS_AS(GridSpec::parse(bad), DomainError);
}

TEST_CASE("refined grids respect the node lattice") {
    const auto x = make_grid(GridSpec::parse("-20:20:100000:refined"), 1.0);
    CHECK(x.size() >= 100000);
    CHECK(x.front() == -20.0);
    CHECK(x.back() == 20.0);
    CHECK(std::is_sorted(x.begin(), x.end()));
    CHECK(std::adjacent_find(x.begin(), x.end()) == x.end());
    // every integer is a grid point (cell endpoints)
    for (int n = -20; n <= 20; ++n) CHECK(std::binary_search(x.begin(), x.end(), double(n)));
    const auto h = make_grid(GridSpec::parse("0:2:100:refined"), 2.0);
    CHECK(std::binary_search(h.begin(), h.end(), 0.5));
    CHECK(std::binary_search(h.begin(), h.end(), 1.5));
}

TEST_CASE("sign and one-sided certificates") {
    const BaseParams p{1.0, std::exp(-1.0), 1.0, 1.0};
    BaseTarget t(p);
    const auto g = GridSpec::parse("-20:20:20000:refined");
    auto cs = verify_sign_two_sided(BaseApproximant(Kind::TwoSided, p), t, g);
    CHECK(cs.passed);
    CHECK(cs.worst_margin >= -cs.tol_used);
    CHECK(verify_one_sided(BaseApproximant(Kind::Minorant, p), t, Kind::Minorant, g).passed);
    CHECK(verify_one_sided(BaseApproximant(Kind::Majorant, p), t, Kind::Majorant, g).passed);
    // the minorant is not a majorant
    CHECK_FALSE(verify_one_sided(BaseApproximant(Kind::Minorant, p), t, Kind::Majorant, g).passed);
    // an approximant built for c = 0.9 against the c = e^{-1} target
    auto bad = verify_sign_two_sided(BaseApproximant::unchecked(Kind::TwoSided, {1.0, 0.9, 1.0, 1.0}), t, g);
    CHECK_FALSE(bad.passed);
    CHECK(bad.worst_margin < -0.01);

    const Json j = cs.to_json();
    CHECK(j["schema"] == "bsx-cert/1");
    CHECK(j["claim"] == "SignTwoSided");
    CHECK(j.contains("params_echo"));
    CHECK(j.contains("worst_location"));
    CHECK(j["grid_spec"]["text"] == g.text());
    CHECK(j["tol_used"].get<double>() == doctest::Approx(1e-9));
}

TEST_CASE("certificate tolerance") {
    CHECK(certificate_tol(BaseApproximant(Kind::TwoSided, {1, 0, 1, 1}, 1e-11)) == 1e-9);
    CHECK(certificate_tol(BaseApproximant(Kind::TwoSided, {1, 0, 1, 1}, 1e-8)) == doctest::Approx(1e-7));
}

TEST_CASE("node certificates") {
    const BaseParams p{2.0, std::exp(-2.0), 1.0, 1.0};
    BaseTarget t(p);
    auto c = verify_nodes(BaseApproximant(Kind::Minorant, p), t, -20, 20, true);
    CHECK(c.passed);
    CHECK(verify_nodes(BaseApproximant(Kind::TwoSided, p), t, -20, 20, false).passed);
    CHECK_THROWS_AS(verify_nodes(BaseApproximant(Kind::TwoSided, p), t, 1, 5, true), DomainError);
    // wrong target: nodes of c = 0
    CHECK_FALSE(verify_nodes(BaseApproximant(Kind::Minorant, p), BaseTarget({2.0, 0.0, 1.0, 1.0}), 1, 5, false).passed);
}

TEST_CASE("numeric L1 errors") {
    const BaseParams p{1.0, std::exp(-1.0), 1.0, 1.0};
    BaseTarget t(p);
    for (Kind k : {Kind::TwoSided, Kind::Minorant, Kind::Majorant}) {
        BaseApproximant a(k, p);
        const double e = numeric_l1_error(a, t).value;
        CHECK(e == doctest::Approx(closed_form_error(k, p)).epsilon(1e-8));
        CHECK(verify_l1_match(a, t, closed_form_error(k, p)).passed);
        CHECK_FALSE(verify_l1_match(a, t, 1.01 * closed_form_error(k, p)).passed);
    }
    StepTarget st;
    CHECK(numeric_l1_error(StepApproximant(Kind::TwoSided, 1.0), st).value == doctest::Approx(0.5).epsilon(1e-8));
    // the same quadrature on the truncated logarithm
    auto log = std::make_shared<const Measure>(Measure::power(1.0));
    SubordinatedApproximant L(Kind::Minorant, log, 1.0);
    CHECK(numeric_l1_error(L, MeasureTarget(log)).value == doctest::Approx(0.5 * std::log(2 * kPi)).epsilon(1e-7));
}

TEST_CASE("exponential type") {
    const BaseParams p{1.0, std::exp(-1.0), 1.0, 1.0};
    auto c = estimate_exponential_type(BaseApproximant(Kind::TwoSided, p), 1, 20);
    CHECK(c.passed);
    CHECK(c.details["fitted_slope"].get<double>() == doctest::Approx(kPi).epsilon(0.05));
    auto m = estimate_exponential_type(BaseApproximant(Kind::Majorant, {1.0, 0.5, 2.0, 1.0}), 2, 10);
    CHECK(m.details["fitted_slope"].get<double>() == doctest::Approx(4 * kPi).epsilon(0.05));
    // a type 2 function does not pass as type 1
    CHECK_FALSE(estimate_exponential_type(BaseApproximant(Kind::Majorant, p), 1, 20).passed);
    CHECK_THROWS_AS(estimate_exponential_type(BaseApproximant(Kind::Majorant, p), 2, 200), Overflow);
    CHECK_THROWS_AS(estimate_exponential_type(BaseApproximant(Kind::Majorant, p), 3, 20), DomainError);
}

TEST_CASE("identity certificate") {
    auto c = verify_identity("one", 1.0, 1.0 + 1e-12, 1e-10);
    CHECK(c.passed);
    CHECK(c.claim == Claim::Identity);
    CHECK(c.params_echo["identity"] == "one");
    CHECK_FALSE(verify_identity("two", 1.0, 1.1, 1e-10).passed);
    CHECK(claim_name(Claim::Minorant) == "Minorant");
}
