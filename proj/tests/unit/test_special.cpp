#include "doctest.h"

#include <cmath>

#include "hypstab/errors.hpp"
#include "hypstab/special.hpp"

using namespace hypstab;
using namespace hypstab::special;

namespace {

// Plain partial sums in long double.
long double brute_a2(long double h, int terms) {
    long double sum = 0.0L, fact_p = 1.0L;
    for (int p = 0; p < terms; ++p) {
        if (p > 0) fact_p *= p;
        const long double fact_p2 = fact_p * (p + 1) * (p + 2);
        sum += ((p % 2) ? -1.0L : 1.0L) * std::pow(h, p + 1) / (fact_p * fact_p2);
    }
    return sum;
}

long double brute_i(int order, long double x, int terms) {
    long double sum = 0.0L, fact_p = 1.0L;
    for (int p = 0; p < terms; ++p) {
        if (p > 0) fact_p *= p;
        long double fact_po = fact_p;
        for (int k = 1; k <= order; ++k) fact_po *= (p + k);
        sum += std::pow(x / 2.0L, 2 * p + order) / (fact_p * fact_po);
    }
    return sum;
}

}  // namespace

TEST_SUITE("special") {

TEST_CASE("A0 values") {
    CHECK(j0_entire(0.0) == 1.0);
    // 2 sqrt(h) at the first zero of J0
    CHECK(std::abs(j0_entire(1.4457964907366962)) < 1e-10);
    CHECK(j0_entire(-1.0) == doctest::Approx(2.2795853023360673).epsilon(1e-12));
}

TEST_CASE("A2 values") {
    CHECK(j2_entire(0.0) == 0.0);
    const double plus = static_cast<double>(brute_a2(1.0L, 30));
    long double positive = 0.0L, fp = 1.0L;
    for (int p = 0; p < 30; ++p) {
        if (p > 0) fp *= p;
        positive += 1.0L / (fp * fp * (p + 1) * (p + 2));
    }
    const double minus = -static_cast<double>(positive);
    CHECK(j2_entire(1.0) == doctest::Approx(plus).epsilon(1e-14));
    CHECK(j2_entire(-1.0) == doctest::Approx(minus).epsilon(1e-14));
    CHECK(j2_entire(-1.0) < 0.0);
}

TEST_CASE("modified Bessel values") {
    CHECK(bessel_i(0, 0.0) == 1.0);
    CHECK(bessel_i(2, 0.0) == 0.0);
    CHECK(bessel_i(0, 1.0) == doctest::Approx(1.2660658777520084).epsilon(1e-13));
    CHECK(bessel_i(2, 2.0) == doctest::Approx(0.6889484476987382).epsilon(1e-13));
    for (double x : {0.3, 1.7, 4.9}) {
        CHECK(bessel_i(0, x) == doctest::Approx(static_cast<double>(brute_i(0, x, 40))).epsilon(1e-13));
        CHECK(bessel_i(2, x) == doctest::Approx(static_cast<double>(brute_i(2, x, 40))).epsilon(1e-13));
    }
    CHECK_THROWS(bessel_i(1, 1.0));
    CHECK_THROWS(bessel_i(0, -1.0));
}

TEST_CASE("A0(-x^2/4) equals I0(x)") {
    for (int i = 0; i <= 50; ++i) {
        const double x = 0.1 * i;
        CHECK(j0_entire(-x * x / 4.0) == doctest::Approx(bessel_i(0, x)).epsilon(1e-10));
    }
}

TEST_CASE("A0 bounded by one for h >= 0") {
    for (int i = 0; i <= 250; ++i) {
        CHECK(std::abs(j0_entire(0.1 * i)) <= 1.0 + 1e-14);
    }
}

TEST_CASE("terminates well inside max_terms for |h| <= 100") {
    SeriesConfig tight;
    tight.max_terms = 120;
    CHECK_NOTHROW(j0_entire(100.0, tight));
    CHECK_NOTHROW(j0_entire(-100.0, tight));
    CHECK_NOTHROW(j2_entire(100.0, tight));
    CHECK_NOTHROW(j2_entire(-100.0, tight));
}

TEST_CASE("derivatives match central differences") {
    for (double h : {-3.0, -0.4, 0.0, 0.8, 5.0}) {
        const double step = 1e-5;
        const double fd0 = (j0_entire(h + step) - j0_entire(h - step)) / (2 * step);
        const double fd2 = (j2_entire(h + step) - j2_entire(h - step)) / (2 * step);
        CHECK(j0_entire_deriv(h) == doctest::Approx(fd0).epsilon(1e-8));
        CHECK(j2_entire_deriv(h) == doctest::Approx(fd2).epsilon(1e-8));
    }
}

TEST_CASE("huge arguments overflow loudly") {
    CHECK_THROWS_AS(j0_entire(-1e300), OverflowError);
}

}
