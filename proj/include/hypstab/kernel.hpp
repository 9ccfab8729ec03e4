#pragma once

#include <variant>
#include <vector>

#include "hypstab/params.hpp"
#include "hypstab/polynomial.hpp"
#include "hypstab/quadrature.hpp"
#include "hypstab/special.hpp"

namespace hypstab {

/// Bessel-form kernel of the constant-coefficient system.
struct ClosedFormKernel {
    DerivedConstants consts;
    special::SeriesConfig series;
};

/// Series truncation of the closed form, stored as monomial coefficients a_0 .. a_{2p+3}.
struct TruncatedKernel {
    int order = 0;
    DerivedConstants consts;
    Polynomial poly;
};

/// User-supplied polynomial kernel on [0, tau].
struct PolynomialKernel {
    double tau = 1.0;
    Polynomial poly;
};

enum class KernelKind { ClosedForm, Truncated, Polynomial };

const char* to_string(KernelKind kind);

/// Delay kernel N on [0, tau].
class KernelSpec {
public:
    using Variant = std::variant<ClosedFormKernel, TruncatedKernel, PolynomialKernel>;

    static KernelSpec closed_form(const DerivedConstants& consts, special::SeriesConfig series = {});
    static KernelSpec truncated(int order, const DerivedConstants& consts, std::vector<double> coeffs);
    static KernelSpec polynomial(double tau, std::vector<double> coeffs);
    static KernelSpec zero(double tau) { return polynomial(tau, {0.0}); }

    KernelKind kind() const;
    double tau() const;
    const Variant& variant() const { return v_; }

    /// N(nu). Throws DomainError outside [0, tau] (a relative slack of 1e-12 is clamped).
    double operator()(double nu) const;
    /// N'(nu).
    double derivative(double nu) const;

    /// Monomial coefficients for Truncated and Polynomial kernels, nullptr for ClosedForm.
    const Polynomial* polynomial() const;
    /// Derived constants for ClosedForm and Truncated kernels, nullptr otherwise.
    const DerivedConstants* constants() const;
    /// Truncation order p, or -1 for other kinds.
    int truncation_order() const;

private:
    explicit KernelSpec(Variant v) : v_(std::move(v)) {}
    double clamp_to_domain(double nu) const;

    Variant v_;
};

/// Truncation N_p with p <= 12, built from N_0 and the recurrence N_{p+1} = N_p + f_p.
KernelSpec truncate(const DerivedConstants& consts, int p);

inline constexpr int kMaxTruncationOrder = 12;

/// Integral of N over [0, tau]. Exact for polynomial kinds; adaptive quadrature otherwise.
double kernel_integral(const KernelSpec& k, const QuadratureConfig& qc = {});

/// ||N1 - N2||_{L1(0, tau)}. Throws ParameterError if the delays differ.
double l1_distance(const KernelSpec& k1, const KernelSpec& k2, const QuadratureConfig& qc = {});

/// ||N||_{L1}, ||N'||_{L1} and the absolute first moment int nu |N(nu)| dnu.
double kernel_l1_norm(const KernelSpec& k, const QuadratureConfig& qc = {});
double kernel_derivative_l1_norm(const KernelSpec& k, const QuadratureConfig& qc = {});
double kernel_abs_first_moment(const KernelSpec& k, const QuadratureConfig& qc = {});

/// N^(j)(tau) for j = 0 .. max_order. Polynomial kinds only (VariantError otherwise).
std::vector<double> derivatives_at_tau(const KernelSpec& k, int max_order);

}  // namespace hypstab
