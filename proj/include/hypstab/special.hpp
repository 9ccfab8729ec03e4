#pragma once

namespace hypstab::special {

struct SeriesConfig {
    double rel_term_tol = 1e-16;
    int max_terms = 400;
};

/// sum_{p>=0} (-1)^p h^p / (p!)^2, i.e. J0(2 sqrt h) for h >= 0 and I0(2 sqrt(-h)) for h < 0.
double j0_entire(double h, const SeriesConfig& cfg = {});

/// sum_{p>=0} (-1)^p h^(p+1) / (p! (p+2)!), i.e. J2(2 sqrt h) continued to h < 0.
double j2_entire(double h, const SeriesConfig& cfg = {});

/// d/dh of j0_entire.
double j0_entire_deriv(double h, const SeriesConfig& cfg = {});

/// d/dh of j2_entire.
double j2_entire_deriv(double h, const SeriesConfig& cfg = {});

/// Modified Bessel function of the first kind, orders 0 and 2 only, x >= 0.
double bessel_i(int order, double x, const SeriesConfig& cfg = {});

}  // namespace hypstab::special
