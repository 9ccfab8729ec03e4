#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hypstab/errors.hpp"
#include "hypstab/kernel.hpp"
#include "hypstab/quadrature.hpp"
#include "fixtures.hpp"

using namespace hypstab;

namespace {

// Both Bessel sums cut after p + 1 terms, evaluated term by term.
double series_partial_sum(const DerivedConstants& c, int p, double nu) {
    const long double tau = c.tau, R = c.R;
    const long double h = R * nu * (tau - nu) / (tau * tau);
    const long double d = R * (tau - nu * c.b);
    long double s0 = 0.0L, s2 = 0.0L, fact = 1.0L;
    for (int k = 0; k <= p; ++k) {
        if (k > 0) fact *= k;
        const long double sign = (k % 2) ? -1.0L : 1.0L;
        s0 += sign * std::pow(h, k) / (fact * fact);
        s2 += sign * std::pow(h, k + 1) / (fact * fact * (k + 1) * (k + 2));
    }
    return static_cast<double>((c.a / tau + d / (tau * tau)) * s0 + d / (tau * tau) * s2);
}

double grid_max_gap(const KernelSpec& a, const KernelSpec& b) {
    double m = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double nu = a.tau() * i / 200.0;
        m = std::max(m, std::abs(a(nu) - b(nu)));
    }
    return m;
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("closed form with a = R = 0 vanishes") {
    const DerivedConstants c = derive_constants({0.0, 0.0, 1.0, 2.0, 0.3, 0.5});
    const KernelSpec k = KernelSpec::closed_form(c);
    for (double nu : {0.0, 0.4, 1.1, c.tau}) CHECK(k(nu) == 0.0);
    CHECK(kernel_integral(k) == 0.0);
}

TEST_CASE("closed form at nu = 0") {
    const DerivedConstants c = derive_constants(fixtures::row5());
    const KernelSpec k = KernelSpec::closed_form(c);
    CHECK(k(0.0) == doctest::Approx((c.a + c.R) / c.tau).epsilon(1e-14));
}

TEST_CASE("counterexample kernel") {
    constexpr double pi = std::numbers::pi;
    const KernelSpec k = fixtures::counterexample_kernel();
    CHECK(k(0.0) == doctest::Approx((pi * pi + 2 * pi) / (16 - 4 * pi)).epsilon(1e-15));
    CHECK(std::abs(kernel_integral(k) - pi / 8) < 1e-15);
    const double by_gauss = gauss_integrate([&](double nu) { return k(nu); }, 0.0, 1.0, 16);
    CHECK(std::abs(by_gauss - pi / 8) < 1e-12);
}

TEST_CASE("kernel evaluation is confined to [0, tau]") {
    const KernelSpec k = KernelSpec::polynomial(2.0, {1.0, 1.0});
    CHECK_THROWS_AS(k(-0.1), DomainError);
    CHECK_THROWS_AS(k(2.1), DomainError);
    CHECK(k(2.0 * (1 + 1e-13)) == doctest::Approx(3.0));
    CHECK_THROWS_AS(KernelSpec::polynomial(0.0, {1.0}), ParameterError);
}

TEST_CASE("N0 coefficients") {
    const DerivedConstants c = derive_constants(fixtures::row5());
    const KernelSpec n0 = truncate(c, 0);
    const Polynomial& p = *n0.polynomial();
    const double t = c.tau, R = c.R, b = c.b;
    REQUIRE(p.size() == 4);
    CHECK(p[0] == doctest::Approx((c.a + R) / t).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(R * R / (2 * t * t) - R * b / (t * t)).epsilon(1e-14));
    CHECK(p[2] == doctest::Approx(-R * R * (1 + b) / (2 * t * t * t)).epsilon(1e-14));
    CHECK(p[3] == doctest::Approx(R * R * b / (2 * t * t * t * t)).epsilon(1e-14));
}

TEST_CASE("truncations store 2p + 4 coefficients") {
    const DerivedConstants c = derive_constants(fixtures::table_row(1));
    for (int p = 0; p <= kMaxTruncationOrder; ++p) {
        const KernelSpec k = truncate(c, p);
        CHECK(k.polynomial()->size() == static_cast<std::size_t>(2 * p + 4));
        CHECK(k.truncation_order() == p);
    }
    CHECK_THROWS_AS(truncate(c, kMaxTruncationOrder + 1), ParameterError);
    CHECK_THROWS_AS(KernelSpec::truncated(1, c, {1.0, 2.0}), ParameterError);
}

TEST_CASE("R = 0 gives constant truncations") {
    const DerivedConstants c = derive_constants({0.0, 0.9, 1.0, 2.0, 0.5, 0.4});
    REQUIRE(c.R == 0.0);
    for (int p : {0, 1, 4}) {
        const KernelSpec k = truncate(c, p);
        for (double nu : {0.0, 0.3, 1.2}) CHECK(k(nu) == doctest::Approx(c.a / c.tau).epsilon(1e-15));
    }
}

TEST_CASE("coefficient expansion matches direct partial sums") {
    for (int row = 0; row < 5; ++row) {
        const DerivedConstants c = derive_constants(fixtures::table_row(row));
        for (int p = 0; p <= 6; ++p) {
            const KernelSpec k = truncate(c, p);
            for (int i = 0; i < 50; ++i) {
                const double nu = c.tau * i / 49.0;
                CHECK(std::abs(k(nu) - series_partial_sum(c, p, nu)) < 1e-10);
            }
        }
    }
}

TEST_CASE("truncations approach the closed form") {
    for (int row = 0; row < 5; ++row) {
        const DerivedConstants c = derive_constants(fixtures::table_row(row));
        const KernelSpec exact = KernelSpec::closed_form(c);
        double prev = INFINITY;
        for (int p = 0; p <= 6; ++p) {
            const double gap = grid_max_gap(exact, truncate(c, p));
            CHECK(gap <= prev);
            prev = gap;
        }
    }
}

TEST_CASE("row 5 integrals") {
    const DerivedConstants c = derive_constants(fixtures::row5());
    CHECK(kernel_integral(KernelSpec::closed_form(c)) == doctest::Approx(1.3143).epsilon(5e-5));
    CHECK(kernel_integral(truncate(c, 0)) == doctest::Approx(1.6561).epsilon(5e-5));
    CHECK(kernel_integral(truncate(c, 1)) == doctest::Approx(1.6117).epsilon(5e-5));
    CHECK(kernel_integral(truncate(c, 2)) == doctest::Approx(1.3768).epsilon(5e-5));
}

TEST_CASE("polynomial integral: antiderivative against quadrature") {
    const KernelSpec k = truncate(derive_constants(fixtures::row5()), 5);
    const double by_gauss = gauss_integrate([&](double nu) { return k(nu); }, 0.0, k.tau(), 64);
    CHECK(kernel_integral(k) == doctest::Approx(by_gauss).epsilon(1e-12));
}

TEST_CASE("L1 distance") {
    const KernelSpec c3 = KernelSpec::polynomial(1.5, {-3.0});
    const KernelSpec zero = KernelSpec::zero(1.5);
    CHECK(l1_distance(c3, zero) == doctest::Approx(4.5).epsilon(1e-14));
    CHECK(l1_distance(c3, c3) == 0.0);
    CHECK_THROWS_AS(l1_distance(c3, KernelSpec::zero(1.0)), ParameterError);

    const DerivedConstants c = derive_constants(fixtures::row5());
    const KernelSpec exact = KernelSpec::closed_form(c);
    double prev = INFINITY;
    for (int p = 0; p <= 3; ++p) {
        const double gap = l1_distance(exact, truncate(c, p));
        CHECK(gap < prev);
        prev = gap;
    }
}

TEST_CASE("L1 distance of a sign-changing difference") {
    // |x - 1| on [0, 3] integrates to 1/2 + 2.
    const KernelSpec a = KernelSpec::polynomial(3.0, {0.0, 1.0});
    const KernelSpec b = KernelSpec::polynomial(3.0, {1.0});
    CHECK(l1_distance(a, b) == doctest::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("derivatives at tau") {
    const KernelSpec k = KernelSpec::polynomial(2.0, {4.0});
    const auto d = derivatives_at_tau(k, 3);
    CHECK(d == std::vector<double>{4.0, 0.0, 0.0, 0.0});

    const DerivedConstants c = derive_constants(fixtures::row5());
    const KernelSpec n0 = truncate(c, 0);
    const Polynomial& p = *n0.polynomial();
    const auto dn = derivatives_at_tau(n0, 1);
    const double t = c.tau;
    CHECK(dn[1] == doctest::Approx(3 * p[3] * t * t + 2 * p[2] * t + p[1]).epsilon(1e-14));
    const double step = 1e-5;
    const double fd = (n0(t) - n0(t - 2 * step)) / (2 * step);
    const double fd_centered = (n0(t - step) - n0(t - 3 * step)) / (2 * step);
    // one-sided at the right end: extrapolate the centered difference linearly
    CHECK(std::abs(dn[1] - (fd + (fd - fd_centered))) < 1e-6);
    CHECK(std::abs(dn[0] - n0(t)) < 1e-15);

    CHECK_THROWS_AS(derivatives_at_tau(KernelSpec::closed_form(c), 1), VariantError);
}

TEST_CASE("closed-form derivative against finite differences") {
    const KernelSpec k = KernelSpec::closed_form(derive_constants(fixtures::table_row(2)));
    for (double nu : {0.2, 0.9, 1.7}) {
        const double fd = (k(nu + 1e-6) - k(nu - 1e-6)) / 2e-6;
        CHECK(k.derivative(nu) == doctest::Approx(fd).epsilon(1e-7));
    }
}

}
