#include "doctest.h"

#include "hypstab/errors.hpp"
#include "hypstab/params.hpp"
#include "fixtures.hpp"

using namespace hypstab;

TEST_SUITE("params") {

TEST_CASE("derived constants of the row 5 system") {
    const DerivedConstants c = derive_constants(fixtures::row5());
    CHECK(c.tau == doctest::Approx(1.9).epsilon(1e-15));
    CHECK(c.xi == doctest::Approx(-0.35).epsilon(1e-15));
    CHECK(c.b == doctest::Approx(0.65).epsilon(1e-15));
    // q s- / mu + rho s+ / lambda = -0.7 * -3.5 * 1.1 + 0.5 * 2.3 * 0.8
    CHECK(c.a == doctest::Approx(3.615).epsilon(1e-14));
    // s+ s- / (lambda mu) = 2.3 * -3.5 * 0.8 * 1.1
    CHECK(c.R == doctest::Approx(-7.084).epsilon(1e-14));
}

TEST_CASE("zero couplings") {
    const DerivedConstants c = derive_constants({0.0, 0.0, 1.0, 1.0, 0.0, 1.0});
    CHECK(c.tau == 2.0);
    CHECK(c.xi == 0.0);
    CHECK(c.a == 0.0);
    CHECK(c.R == 0.0);
    CHECK(c.b == 1.0);
}

TEST_CASE("xi is the exact product and b = 1 + xi") {
    const HyperbolicSystem s{0.3, -0.2, 1.7, 0.9, 0.37, -0.61};
    const DerivedConstants c = derive_constants(s);
    CHECK(c.xi == s.q * s.rho);
    CHECK(c.b == 1.0 + c.xi);
}

TEST_CASE("scaling both couplings scales R quadratically") {
    HyperbolicSystem s = fixtures::table_row(2);
    const DerivedConstants c1 = derive_constants(s);
    s.sigma_plus *= 3.0;
    s.sigma_minus *= 3.0;
    const DerivedConstants c3 = derive_constants(s);
    CHECK(c3.R == doctest::Approx(9.0 * c1.R).epsilon(1e-14));
    CHECK(c3.tau == c1.tau);
    CHECK(c3.xi == c1.xi);
    CHECK(c3.b == c1.b);
}

TEST_CASE("validation") {
    CHECK(validate({0.0, 0.0, 1.0, 1.0, 0.0, 1.0}).empty());

    const auto bad_lambda = validate({0.0, 0.0, -1.0, 1.0, 0.0, 1.0});
    REQUIRE(bad_lambda.size() == 1);
    CHECK(bad_lambda[0].field == "lambda");
    CHECK(bad_lambda[0].message.find("positive") != std::string::npos);

    const auto bad_q = validate({0.0, 0.0, 1.0, 1.0, 0.0, 0.0});
    REQUIRE(bad_q.size() == 1);
    CHECK(bad_q[0].field == "q");

    CHECK(validate({0.0, 0.0, 0.0, -2.0, 0.0, 0.0}).size() == 3);
}

TEST_CASE("derive_constants names the offending field") {
    try {
        derive_constants({0.0, 0.0, 1.0, 0.0, 0.0, 1.0});
        FAIL("expected ParameterError");
    } catch (const ParameterError& e) {
        CHECK(e.field() == "mu");
    }
    CHECK_THROWS_AS(HyperbolicSystem::from_transport_times(0, 0, 0.0, 1, 0, 1), ParameterError);
}

TEST_CASE("|xi| >= 1 is accepted here") {
    CHECK_NOTHROW(derive_constants({0.0, 0.0, 1.0, 1.0, 2.0, 1.0}));
}

}
