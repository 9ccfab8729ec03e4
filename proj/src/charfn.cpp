#include "hypstab/charfn.hpp"

#include <cmath>
#include <sstream>

#include "hypstab/compensated.hpp"
#include "hypstab/errors.hpp"

namespace hypstab {

// Kernel samples at the Gauss-Legendre nodes of every refinement level, premultiplied by
// the quadrature weights.
struct CharFn::Tables {
    struct Level {
        std::vector<double> nodes;
        std::vector<double> w_n;     // w_i N(nu_i)
        std::vector<double> w_nu_n;  // w_i nu_i N(nu_i)
    };
    std::vector<Level> levels;
    double abs_floor = 0.0;        // sum |w_i N(nu_i)| at the finest level
    double abs_floor_moment = 0.0; // sum |w_i nu_i N(nu_i)| at the finest level
};

CharFn::CharFn(double xi, KernelSpec kernel, QuadratureConfig qc, LaplaceMethod method)
    : xi_(xi), kernel_(std::move(kernel)), qc_(qc), method_(method) {
    if (!std::isfinite(xi_)) throw ParameterError("xi", "xi must be finite");
    check_config(qc_);
    integral_ = hypstab::kernel_integral(kernel_, qc_);
    l1_ = kernel_l1_norm(kernel_, qc_);

    const bool need_tables = method_ == LaplaceMethod::Quadrature || kernel_.polynomial() == nullptr;
    if (!need_tables) return;

    auto tables = std::make_shared<Tables>();
    const double tau = kernel_.tau();
    const double half = 0.5 * tau;
    for (int level = 0; level <= qc_.max_doublings; ++level) {
        const GaussRule& rule = gauss_legendre(nodes_at_level(qc_, level));
        Tables::Level lv;
        const std::size_t n = rule.nodes.size();
        lv.nodes.resize(n);
        lv.w_n.resize(n);
        lv.w_nu_n.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double nu = half * (1.0 + rule.nodes[i]);
            const double wn = half * rule.weights[i] * kernel_(nu);
            lv.nodes[i] = nu;
            lv.w_n[i] = wn;
            lv.w_nu_n[i] = wn * nu;
        }
        tables->levels.push_back(std::move(lv));
    }
    for (std::size_t i = 0; i < tables->levels.back().nodes.size(); ++i) {
        tables->abs_floor += std::abs(tables->levels.back().w_n[i]);
        tables->abs_floor_moment += std::abs(tables->levels.back().w_nu_n[i]);
    }
    tables_ = std::move(tables);
}

DeltaValue CharFn::evaluate(cplx s, bool with_derivative) const {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
        throw DomainError("characteristic function evaluated at a non-finite point");
    }
    const double tau = kernel_.tau();
    const cplx e_tau = std::exp(-s * tau);
    cplx lap = 0.0, lap_moment = 0.0;

    if (tables_) {
        auto at_level = [&](const Tables::Level& lv, cplx& l0, cplx& l1) {
            CompensatedSum<cplx> a0, a1;
            for (std::size_t i = 0; i < lv.nodes.size(); ++i) {
                const cplx e = std::exp(-s * lv.nodes[i]);
                a0.add(lv.w_n[i] * e);
                if (with_derivative) a1.add(lv.w_nu_n[i] * e);
            }
            l0 = a0.value();
            l1 = a1.value();
        };
        // Relative to the L1 mass of the integrand so that near-zero transforms converge.
        const double growth = std::exp(std::max(0.0, -s.real() * tau));
        const double floor0 = tables_->abs_floor * growth;
        const double floor1 = tables_->abs_floor_moment * growth;
        cplx prev0, prev1;
        at_level(tables_->levels[0], prev0, prev1);
        bool converged = tables_->levels.size() == 1;
        for (std::size_t level = 1; level < tables_->levels.size() && !converged; ++level) {
            cplx cur0, cur1;
            at_level(tables_->levels[level], cur0, cur1);
            const bool ok0 = std::abs(cur0 - prev0) <= qc_.rel_tol * std::max(std::abs(cur0), floor0);
            const bool ok1 = !with_derivative ||
                             std::abs(cur1 - prev1) <= qc_.rel_tol * std::max(std::abs(cur1), floor1);
            if (ok0 && ok1) converged = true;
            else if (level + 1 == tables_->levels.size()) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "Laplace transform quadrature did not converge at s = " << s
                    << "; last two estimates " << prev0 << " and " << cur0;
                throw ConvergenceError(msg.str());
            }
            prev0 = cur0;
            prev1 = cur1;
        }
        lap = prev0;
        lap_moment = prev1;
    } else {
        const Polynomial& poly = *kernel_.polynomial();
        const int deg = poly.degree();
        const auto mu = laplace_moments(s, tau, deg + (with_derivative ? 1 : 0));
        CompensatedSum<cplx> a0, a1;
        for (int k = 0; k <= deg; ++k) {
            a0.add(poly[k] * mu[k]);
            if (with_derivative) a1.add(poly[k] * mu[k + 1]);
        }
        lap = a0.value();
        lap_moment = a1.value();
    }

    DeltaValue out;
    out.value = 1.0 - xi_ * e_tau - lap;
    out.derivative = with_derivative ? tau * xi_ * e_tau + lap_moment : cplx(0.0);
    return out;
}

double CharFn::M(double omega) const {
    if (omega == 0.0) return delta_at_zero();
    return delta(cplx(0.0, omega)).real();
}

double CharFn::S(double omega) const {
    if (omega == 0.0) return 0.0;
    return delta(cplx(0.0, omega)).imag();
}

std::vector<cplx> laplace_moments(cplx s, double tau, int max_power) {
    // Work with m_k = int_0^1 t^k e^{-x t} dt, x = s tau; then mu_k = tau^{k+1} m_k.
    // Upward recurrence m_k = (k m_{k-1} - e^{-x}) / x is stable for k <= |x|, downward
    // m_{k-1} = (x m_k + e^{-x}) / k for k > |x|, seeded by a series for the top moment.
    const int K = max_power;
    std::vector<cplx> m(K + 1);
    const cplx x = s * tau;
    const double ax = std::abs(x);
    const cplx ex = std::exp(-x);
    const int k_up = static_cast<int>(std::min<double>(K, std::floor(ax)));

    if (k_up >= 1) {
        m[0] = (1.0 - ex) / x;
        for (int k = 1; k <= k_up; ++k) m[k] = (static_cast<double>(k) * m[k - 1] - ex) / x;
    }
    if (k_up < K || k_up == 0) {
        // m_K = e^{-x} sum_j x^j K! / (K + j + 1)!, terms decreasing since |x| < K + 1.
        CompensatedSum<cplx> acc;
        cplx term = 1.0 / (K + 1.0);
        for (int j = 0; j < 2000; ++j) {
            acc.add(term);
            if (std::abs(term) <= 1e-17 * std::abs(acc.value())) break;
            term *= x / (K + j + 2.0);
        }
        m[K] = ex * acc.value();
        const int stop = (k_up >= 1) ? k_up + 1 : 0;
        for (int k = K; k > stop; --k) m[k - 1] = (x * m[k] + ex) / static_cast<double>(k);
    }

    double tpow = tau;
    for (int k = 0; k <= K; ++k) {
        m[k] *= tpow;
        tpow *= tau;
    }
    return m;
}

cplx QuasiPolyForm::operator()(cplx s) const {
    if (std::abs(s) < 1e-8) return delta_at_zero;
    return (p0_num(s) + p1_num(s) * std::exp(-s * tau)) / std::pow(s, degree);
}

QuasiPolyForm quasipoly_form(const KernelSpec& k, double xi) {
    const Polynomial* poly = k.polynomial();
    if (!poly) throw VariantError("quasipoly_form needs a truncated or polynomial kernel");
    const int n = poly->degree();
    const auto derivs = derivatives_at_tau(k, n);

    QuasiPolyForm out;
    out.tau = k.tau();
    out.degree = n + 1;
    std::vector<double> p0(n + 2, 0.0), p1(n + 2, 0.0);
    p0[n + 1] = 1.0;
    p1[n + 1] = -xi;
    std::vector<double> factorial(n + 1, 1.0);
    for (int j = 1; j <= n; ++j) factorial[j] = factorial[j - 1] * j;
    for (int kpow = 0; kpow <= n; ++kpow) {
        const int j = n - kpow;  // derivative order paired with s^kpow
        p0[kpow] = -factorial[j] * (*poly)[j];
        p1[kpow] = derivs[j];
    }
    out.p0_num = Polynomial(std::move(p0));
    out.p1_num = Polynomial(std::move(p1));
    out.delta_at_zero = 1.0 - xi - poly->integral(0.0, k.tau());
    return out;
}

}  // namespace hypstab
