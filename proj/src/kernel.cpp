#include "hypstab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hypstab/compensated.hpp"
#include "hypstab/errors.hpp"

namespace hypstab {

const char* to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::ClosedForm: return "closed_form";
        case KernelKind::Truncated: return "truncated";
        case KernelKind::Polynomial: return "polynomial";
    }
    return "unknown";
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_coeffs(const std::vector<double>& coeffs) {
    if (coeffs.empty()) throw ParameterError("coeffs", "kernel needs at least one coefficient");
    for (double c : coeffs) {
        if (!std::isfinite(c)) throw ParameterError("coeffs", "kernel coefficients must be finite");
    }
}

void check_tau(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw ParameterError("tau", "tau must be positive and finite");
    }
}

}  // namespace

KernelSpec KernelSpec::closed_form(const DerivedConstants& consts, special::SeriesConfig series) {
    check_tau(consts.tau);
    return KernelSpec(ClosedFormKernel{consts, series});
}

KernelSpec KernelSpec::truncated(int order, const DerivedConstants& consts,
                                 std::vector<double> coeffs) {
    check_tau(consts.tau);
    if (order < 0 || order > kMaxTruncationOrder) {
        throw ParameterError("p", "truncation order must lie in [0, 12]");
    }
    check_coeffs(coeffs);
    if (coeffs.size() != static_cast<std::size_t>(2 * order + 4)) {
        std::ostringstream msg;
        msg << "truncation of order " << order << " needs exactly " << 2 * order + 4
            << " coefficients, got " << coeffs.size();
        throw ParameterError("coeffs", msg.str());
    }
    return KernelSpec(TruncatedKernel{order, consts, Polynomial(std::move(coeffs))});
}

KernelSpec KernelSpec::polynomial(double tau, std::vector<double> coeffs) {
    check_tau(tau);
    check_coeffs(coeffs);
    return KernelSpec(PolynomialKernel{tau, Polynomial(std::move(coeffs))});
}

KernelKind KernelSpec::kind() const {
    return static_cast<KernelKind>(v_.index());
}

double KernelSpec::tau() const {
    return std::visit(overloaded{[](const ClosedFormKernel& k) { return k.consts.tau; },
                                 [](const TruncatedKernel& k) { return k.consts.tau; },
                                 [](const PolynomialKernel& k) { return k.tau; }},
                      v_);
}

double KernelSpec::clamp_to_domain(double nu) const {
    const double t = tau();
    const double slack = 1e-12 * t;
    if (!(nu >= -slack && nu <= t + slack)) {
        std::ostringstream msg;
        msg << "kernel evaluated at nu = " << nu << " outside [0, " << t << "]";
        throw DomainError(msg.str());
    }
    return std::clamp(nu, 0.0, t);
}

double KernelSpec::operator()(double nu) const {
    nu = clamp_to_domain(nu);
    return std::visit(
        overloaded{[nu](const ClosedFormKernel& k) {
                       const auto& c = k.consts;
                       const double t2 = c.tau * c.tau;
                       const double h = c.R * nu * (c.tau - nu) / t2;
                       const double d = c.R * (c.tau - nu * c.b);
                       return (c.a / c.tau + d / t2) * special::j0_entire(h, k.series) +
                              d / t2 * special::j2_entire(h, k.series);
                   },
                   [nu](const TruncatedKernel& k) { return k.poly(nu); },
                   [nu](const PolynomialKernel& k) { return k.poly(nu); }},
        v_);
}

double KernelSpec::derivative(double nu) const {
    nu = clamp_to_domain(nu);
    return std::visit(
        overloaded{[nu](const ClosedFormKernel& k) {
                       const auto& c = k.consts;
                       const double t2 = c.tau * c.tau;
                       const double h = c.R * nu * (c.tau - nu) / t2;
                       const double dh = c.R * (c.tau - 2.0 * nu) / t2;
                       const double d = c.R * (c.tau - nu * c.b);
                       const double dd = -c.R * c.b;
                       const double j0 = special::j0_entire(h, k.series);
                       const double j2 = special::j2_entire(h, k.series);
                       const double j0p = special::j0_entire_deriv(h, k.series);
                       const double j2p = special::j2_entire_deriv(h, k.series);
                       return dd / t2 * (j0 + j2) + (c.a / c.tau + d / t2) * j0p * dh +
                              d / t2 * j2p * dh;
                   },
                   [nu](const TruncatedKernel& k) { return k.poly.derivative()(nu); },
                   [nu](const PolynomialKernel& k) { return k.poly.derivative()(nu); }},
        v_);
}

const Polynomial* KernelSpec::polynomial() const {
    if (auto* t = std::get_if<TruncatedKernel>(&v_)) return &t->poly;
    if (auto* p = std::get_if<PolynomialKernel>(&v_)) return &p->poly;
    return nullptr;
}

const DerivedConstants* KernelSpec::constants() const {
    if (auto* c = std::get_if<ClosedFormKernel>(&v_)) return &c->consts;
    if (auto* t = std::get_if<TruncatedKernel>(&v_)) return &t->consts;
    return nullptr;
}

int KernelSpec::truncation_order() const {
    if (auto* t = std::get_if<TruncatedKernel>(&v_)) return t->order;
    return -1;
}

KernelSpec truncate(const DerivedConstants& c, int p) {
    if (p < 0 || p > kMaxTruncationOrder) {
        throw ParameterError("p", "truncation order must lie in [0, 12]");
    }
    check_tau(c.tau);
    const double tau = c.tau, t2 = tau * tau, R = c.R, b = c.b;

    // N_0 in monomial form.
    const std::size_t ncoef = static_cast<std::size_t>(2 * p + 4);
    std::vector<CompensatedSum<double>> acc(ncoef);
    acc[0].add((c.a + R) / tau);
    acc[1].add(R * R / (2.0 * t2) - R * b / t2);
    acc[2].add(-R * R * (1.0 + b) / (2.0 * t2 * tau));
    acc[3].add(R * R * b / (2.0 * t2 * t2));

    // Building blocks of f_k: g = a/tau + d/tau^2, dd = d/tau^2, h.
    const Polynomial g({(c.a + R) / tau, -R * b / t2});
    const Polynomial dd({R / tau, -R * b / t2});
    const Polynomial h({0.0, R / tau, -R / t2});

    Polynomial h_pow = h;  // h^{k+1}
    double fact_k1 = 1.0;  // (k+1)!
    double fact_k3 = 6.0;  // (k+3)!
    for (int k = 0; k < p; ++k) {
        fact_k1 *= (k + 1);
        if (k > 0) fact_k3 *= (k + 3);
        const double sign = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^{k+1}
        const Polynomial h_next = h_pow * h;            // h^{k+2}
        const Polynomial f = sign * (g * h_pow * (1.0 / (fact_k1 * fact_k1)) +
                                     dd * h_next * (1.0 / (fact_k1 * fact_k3)));
        for (std::size_t j = 0; j < f.size() && j < ncoef; ++j) acc[j].add(f[j]);
        h_pow = h_next;
    }

    std::vector<double> coeffs(ncoef);
    for (std::size_t j = 0; j < ncoef; ++j) coeffs[j] = acc[j].value();
    return KernelSpec::truncated(p, c, std::move(coeffs));
}

double kernel_integral(const KernelSpec& k, const QuadratureConfig& qc) {
    if (const Polynomial* poly = k.polynomial()) return poly->integral(0.0, k.tau());
    check_config(qc);
    const double mass = gauss_integrate([&k](double nu) { return std::abs(k(nu)); }, 0.0, k.tau(),
                                        nodes_at_level(qc, 0));
    return adaptive_integrate([&k](double nu) { return k(nu); }, 0.0, k.tau(), qc, mass);
}

double l1_distance(const KernelSpec& k1, const KernelSpec& k2, const QuadratureConfig& qc) {
    const double t1 = k1.tau(), t2 = k2.tau();
    if (std::abs(t1 - t2) > 1e-12 * std::max(t1, t2)) {
        std::ostringstream msg;
        msg << "kernels have different delays (" << t1 << " vs " << t2 << ")";
        throw ParameterError("tau", msg.str());
    }
    check_config(qc);
    return l1_norm([&](double nu) { return k1(nu) - k2(nu); }, 0.0, std::min(t1, t2), qc);
}

double kernel_l1_norm(const KernelSpec& k, const QuadratureConfig& qc) {
    check_config(qc);
    return l1_norm([&k](double nu) { return k(nu); }, 0.0, k.tau(), qc);
}

double kernel_derivative_l1_norm(const KernelSpec& k, const QuadratureConfig& qc) {
    check_config(qc);
    return l1_norm([&k](double nu) { return k.derivative(nu); }, 0.0, k.tau(), qc);
}

double kernel_abs_first_moment(const KernelSpec& k, const QuadratureConfig& qc) {
    check_config(qc);
    return l1_norm([&k](double nu) { return nu * k(nu); }, 0.0, k.tau(), qc);
}

std::vector<double> derivatives_at_tau(const KernelSpec& k, int max_order) {
    const Polynomial* poly = k.polynomial();
    if (!poly) {
        throw VariantError("derivatives_at_tau needs a truncated or polynomial kernel");
    }
    if (max_order < 0) throw ParameterError("order", "derivative order must be nonnegative");
    std::vector<double> out;
    out.reserve(max_order + 1);
    Polynomial d = *poly;
    for (int j = 0; j <= max_order; ++j) {
        out.push_back(d(k.tau()));
        d = d.derivative();
    }
    return out;
}

}  // namespace hypstab
