#include "hypstab/params.hpp"

#include <cmath>

#include "hypstab/errors.hpp"

namespace hypstab {

HyperbolicSystem HyperbolicSystem::from_transport_times(double sigma_plus, double sigma_minus,
                                                        double inv_lambda, double inv_mu,
                                                        double rho, double q) {
    if (!(inv_lambda > 0.0) || !std::isfinite(inv_lambda)) {
        throw ParameterError("inv_lambda", "inv_lambda must be positive and finite");
    }
    if (!(inv_mu > 0.0) || !std::isfinite(inv_mu)) {
        throw ParameterError("inv_mu", "inv_mu must be positive and finite");
    }
    return HyperbolicSystem{sigma_plus, sigma_minus, 1.0 / inv_lambda, 1.0 / inv_mu, rho, q};
}

std::vector<Violation> validate(const HyperbolicSystem& sys) {
    std::vector<Violation> out;
    auto finite = [&](const char* name, double v) {
        if (!std::isfinite(v)) out.push_back({name, std::string(name) + " must be finite"});
    };
    finite("sigma_plus", sys.sigma_plus);
    finite("sigma_minus", sys.sigma_minus);
    finite("rho", sys.rho);
    finite("q", sys.q);
    if (!(sys.lambda > 0.0) || !std::isfinite(sys.lambda)) {
        out.push_back({"lambda", "lambda must be positive"});
    }
    if (!(sys.mu > 0.0) || !std::isfinite(sys.mu)) {
        out.push_back({"mu", "mu must be positive"});
    }
    if (sys.q == 0.0) {
        out.push_back({"q", "q must be nonzero (standing assumption of the model: u(t,0) = q v(t,0) with q != 0)"});
    }
    return out;
}

DerivedConstants derive_constants(const HyperbolicSystem& sys) {
    auto violations = validate(sys);
    if (!violations.empty()) {
        throw ParameterError(violations.front().field, violations.front().message);
    }
    DerivedConstants c;
    c.tau = 1.0 / sys.lambda + 1.0 / sys.mu;
    c.xi = sys.q * sys.rho;
    c.a = sys.q * sys.sigma_minus / sys.mu + sys.rho * sys.sigma_plus / sys.lambda;
    c.R = sys.sigma_plus * sys.sigma_minus / (sys.lambda * sys.mu);
    c.b = 1.0 + c.xi;
    return c;
}

}  // namespace hypstab
