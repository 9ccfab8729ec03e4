#pragma once

#include <string>
#include <vector>

namespace hypstab {

/// Constant-coefficient 2x2 hyperbolic system
///   u_t + lambda u_x = sigma_plus v,   v_t - mu v_x = sigma_minus u,
///   u(t,0) = q v(t,0),                 v(t,1) = rho u(t,1).
struct HyperbolicSystem {
    double sigma_plus = 0.0;
    double sigma_minus = 0.0;
    double lambda = 1.0;
    double mu = 1.0;
    double rho = 0.0;
    double q = 1.0;

    /// Build from transport times 1/lambda and 1/mu, the form used in published tables.
    static HyperbolicSystem from_transport_times(double sigma_plus, double sigma_minus,
                                                 double inv_lambda, double inv_mu,
                                                 double rho, double q);
};

/// Scalars derived from a HyperbolicSystem and shared by every downstream module.
struct DerivedConstants {
    double tau = 0.0;  ///< characteristic time 1/lambda + 1/mu
    double xi = 0.0;   ///< principal delay coefficient q*rho
    double a = 0.0;    ///< q sigma_minus / mu + rho sigma_plus / lambda
    double R = 0.0;    ///< sigma_plus sigma_minus / (lambda mu)
    double b = 1.0;    ///< 1 + xi
};

struct Violation {
    std::string field;
    std::string message;
};

/// Every violated invariant of `sys`. Empty means valid.
std::vector<Violation> validate(const HyperbolicSystem& sys);

/// Throws ParameterError naming the first offending field.
DerivedConstants derive_constants(const HyperbolicSystem& sys);

}  // namespace hypstab
