#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "hypstab/kernel.hpp"
#include "hypstab/polynomial.hpp"
#include "hypstab/quadrature.hpp"

namespace hypstab {

using cplx = std::complex<double>;

/// How the Laplace transform L(s) = int_0^tau N(nu) e^{-s nu} dnu is evaluated.
enum class LaplaceMethod {
    Auto,        ///< exact moments for polynomial kernels, quadrature for the closed form
    Quadrature,  ///< Gauss-Legendre for every kernel kind
};

struct DeltaValue {
    cplx value;
    cplx derivative;
};

/// Characteristic function Delta(s) = 1 - xi e^{-s tau} - int_0^tau N(nu) e^{-s nu} dnu
/// of the integral difference equation z(t) = xi z(t - tau) + int_0^tau N(nu) z(t - nu) dnu.
///
/// Immutable after construction; copies share the precomputed quadrature tables, so
/// evaluation from several threads is safe.
class CharFn {
public:
    CharFn(double xi, KernelSpec kernel, QuadratureConfig qc = {},
           LaplaceMethod method = LaplaceMethod::Auto);

    double xi() const { return xi_; }
    double tau() const { return kernel_.tau(); }
    const KernelSpec& kernel() const { return kernel_; }
    const QuadratureConfig& quadrature() const { return qc_; }
    LaplaceMethod method() const { return method_; }
    bool uses_quadrature() const { return tables_ != nullptr; }

    cplx delta(cplx s) const { return evaluate(s, false).value; }
    /// Delta'(s) = tau xi e^{-s tau} + int_0^tau nu N(nu) e^{-s nu} dnu.
    cplx delta_prime(cplx s) const { return evaluate(s, true).derivative; }
    DeltaValue delta_and_prime(cplx s) const { return evaluate(s, true); }

    /// Re Delta(i omega) and Im Delta(i omega). S(0) is exactly zero.
    double M(double omega) const;
    double S(double omega) const;

    /// Delta(0) = 1 - xi - int N, from the exact integral when available.
    double delta_at_zero() const { return 1.0 - xi_ - integral_; }
    double kernel_integral() const { return integral_; }
    double kernel_l1() const { return l1_; }
    /// Scale used by relative tolerances: 1 + |xi| + ||N||_L1.
    double scale() const { return 1.0 + std::abs(xi_) + l1_; }

private:
    struct Tables;
    DeltaValue evaluate(cplx s, bool with_derivative) const;

    double xi_;
    KernelSpec kernel_;
    QuadratureConfig qc_;
    LaplaceMethod method_;
    double integral_ = 0.0;
    double l1_ = 0.0;
    std::shared_ptr<const Tables> tables_;
};

/// int_0^tau nu^k e^{-s nu} dnu for k = 0 .. max_power, evaluated stably for every s.
std::vector<cplx> laplace_moments(cplx s, double tau, int max_power);

/// Delta_p(s) = (P0num(s) + P1num(s) e^{-s tau}) / s^degree for a polynomial kernel,
/// obtained by repeated integration by parts.
struct QuasiPolyForm {
    double tau = 1.0;
    int degree = 0;        ///< numerator degree; 2p+4 for a truncation of order p
    Polynomial p0_num;
    Polynomial p1_num;
    double delta_at_zero = 1.0;  ///< removable-singularity value at s = 0

    /// Delta_p(s). For |s| < 1e-8 returns the s = 0 limit.
    cplx operator()(cplx s) const;
};

/// Throws VariantError for closed-form kernels.
QuasiPolyForm quasipoly_form(const KernelSpec& k, double xi);

}  // namespace hypstab
