#include "doctest.h"

#include <cmath>
#include <numbers>

#include "hypstab/errors.hpp"
#include "hypstab/polynomial.hpp"
#include "hypstab/quadrature.hpp"

using namespace hypstab;

TEST_SUITE("numerics") {

TEST_CASE("polynomial calculus") {
    const Polynomial p({1.0, -3.0, 0.0, 2.0});  // 2x^3 - 3x + 1
    CHECK(p(2.0) == 11.0);
    CHECK(p.derivative()(2.0) == 21.0);
    CHECK(p.derivative_at(2, 1.5) == 18.0);
    CHECK(p.integral(0.0, 2.0) == doctest::Approx(8.0 - 6.0 + 2.0));
    CHECK(p.first_moment(0.0, 1.0) == doctest::Approx(2.0 / 5 - 1.0 + 0.5));
    const Polynomial q = p * Polynomial({0.0, 1.0});
    CHECK(q(3.0) == doctest::Approx(3.0 * p(3.0)));
    const std::complex<double> z(0.5, -1.0);
    CHECK(std::abs(p(z) - (2.0 * z * z * z - 3.0 * z + 1.0)) < 1e-15);
}

TEST_CASE("real roots, simple and double") {
    // (x - 1)(x - 2)(x + 3)
    const Polynomial p({6.0, -7.0, 0.0, 1.0});
    const auto r = real_roots(p, -10.0, 10.0);
    REQUIRE(r.size() == 3);
    CHECK(r[0] == doctest::Approx(-3.0));
    CHECK(r[1] == doctest::Approx(1.0));
    CHECK(r[2] == doctest::Approx(2.0));
    CHECK(real_roots(p, 0.0, 1.5).size() == 1);

    // (x - 0.5)^2 (x + 1)
    const Polynomial d({0.25, -0.75, 0.0, 1.0});
    const auto rd = real_roots(d, -2.0, 2.0);
    REQUIRE(rd.size() == 2);
    CHECK(rd[1] == doctest::Approx(0.5).epsilon(1e-7));

    CHECK(real_roots(Polynomial({1.0, 0.0, 1.0}), -5.0, 5.0).empty());
}

TEST_CASE("Gauss-Legendre is exact for degree 2n - 1") {
    for (int n : {8, 16, 64}) {
        const auto& g = gauss_legendre(n);
        double w = 0.0;
        for (double x : g.weights) w += x;
        CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
        const double v = gauss_integrate([&](double x) { return std::pow(x, 2 * n - 1) + std::pow(x, 2 * n - 2); },
                                         0.0, 1.0, n);
        CHECK(v == doctest::Approx(1.0 / (2 * n) + 1.0 / (2 * n - 1)).epsilon(1e-13));
    }
}

TEST_CASE("adaptive integration and its failure report") {
    QuadratureConfig qc;
    const double v = adaptive_integrate([](double x) { return std::exp(-x) * std::cos(20 * x); }, 0.0, 3.0, qc);
    const double exact = (1.0 - std::exp(-3.0) * (std::cos(60.0) - 20 * std::sin(60.0))) / 401.0;
    CHECK(v == doctest::Approx(exact).epsilon(1e-12));

    QuadratureConfig tiny{8, 1, 1e-15};
    try {
        adaptive_integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, tiny);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(std::string(e.what()).find("estimates") != std::string::npos);
    }
    CHECK_THROWS_AS(check_config({4, 6, 1e-12}), ParameterError);
}

TEST_CASE("sign changes and L1 norm") {
    const auto f = [](double x) { return std::sin(std::numbers::pi * x); };
    const auto z = sign_changes(f, 0.5, 3.5);
    REQUIRE(z.size() == 3);
    CHECK(z[0] == doctest::Approx(1.0));
    CHECK(z[2] == doctest::Approx(3.0));
    CHECK(l1_norm(f, 0.0, 3.0, {}) == doctest::Approx(6.0 / std::numbers::pi).epsilon(1e-12));
}

}
