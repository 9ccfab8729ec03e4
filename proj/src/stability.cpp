#include "hypstab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hypstab/errors.hpp"

namespace hypstab {

const char* to_string(VerdictKind v) {
    switch (v) {
        case VerdictKind::Stable: return "stable";
        case VerdictKind::Unstable: return "unstable";
        case VerdictKind::MarginalImaginaryRoot: return "marginal_imaginary_root";
        case VerdictKind::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

const char* to_string(NecessaryOutcome n) {
    switch (n) {
        case NecessaryOutcome::Pass: return "pass";
        case NecessaryOutcome::FailAtZero: return "fail_at_zero";
        case NecessaryOutcome::Boundary: return "boundary";
    }
    return "unknown";
}

NecessaryTest necessary_test(const CharFn& f, const StabilityConfig& cfg) {
    NecessaryTest out;
    out.delta_at_zero = f.delta_at_zero();
    if (std::abs(out.delta_at_zero) <= cfg.boundary_tol) out.outcome = NecessaryOutcome::Boundary;
    else if (out.delta_at_zero < 0.0) out.outcome = NecessaryOutcome::FailAtZero;
    return out;
}

FrequencyWindow frequency_window(const CharFn& f, const StabilityConfig& cfg) {
    const double axi = std::abs(f.xi());
    if (!(axi < 1.0)) {
        throw DomainError("frequency window needs |xi| < 1 (principal part unstable otherwise)");
    }
    const KernelSpec& k = f.kernel();
    const double tau = f.tau();
    const QuadratureConfig& qc = f.quadrature();
    FrequencyWindow w;
    w.tail_constant = std::abs(k(0.0)) + std::abs(k(tau)) + kernel_derivative_l1_norm(k, qc);
    w.floor = 4.0 * std::numbers::pi / tau;
    w.omega_max = std::max(cfg.window_safety * w.tail_constant / (1.0 - axi), w.floor);
    w.m_lipschitz = tau * axi + kernel_abs_first_moment(k, qc);
    w.m_curvature = tau * tau * axi +
                    l1_norm([&k](double nu) { return nu * nu * k(nu); }, 0.0, tau, qc);
    return w;
}

namespace {

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

struct Sample {
    double w;
    double m;   // M(w)
    double dm;  // M'(w)
};

class MScanner {
public:
    MScanner(const CharFn& f, const FrequencyWindow& win, const StabilityConfig& cfg)
        : f_(f), win_(win), cfg_(cfg) {}

    MZeroScan run() {
        MZeroScan out;
        const double h0 = std::min(f_.tau(), 1.0) / 64.0 / std::max(1, cfg_.grid_refine);
        out.base_step = h0;
        const long cells = static_cast<long>(std::ceil(win_.omega_max / h0));
        Sample prev{0.0, f_.delta_at_zero(), 0.0};
        for (long i = 1; i <= cells && !inconclusive_; ++i) {
            const double w = (i == cells) ? win_.omega_max : h0 * static_cast<double>(i);
            const Sample cur = sample(w);
            cell(prev, cur, 0);
            prev = cur;
        }
        std::sort(zeros_.begin(), zeros_.end(),
                  [](const MZero& a, const MZero& b) { return a.omega > b.omega; });
        // A zero sitting exactly on a grid point can be reported by both neighbouring cells.
        std::vector<MZero> unique;
        for (const auto& z : zeros_) {
            if (!unique.empty() && std::abs(unique.back().omega - z.omega) < 10.0 * cfg_.polish_tol) continue;
            unique.push_back(z);
        }
        for (auto& z : unique) z.s_value = f_.S(z.omega);
        out.zeros = std::move(unique);
        out.inconclusive = inconclusive_;
        out.reason = reason_;
        out.evaluations = evals_;
        return out;
    }

private:
    Sample sample(double w) {
        ++evals_;
        if (w == 0.0) return {0.0, f_.delta_at_zero(), 0.0};
        const DeltaValue dv = f_.delta_and_prime(cplx(0.0, w));
        return {w, dv.value.real(), -dv.derivative.imag()};
    }

    void flag(const std::string& why) {
        if (!inconclusive_) reason_ = why;
        inconclusive_ = true;
    }

    // Lower bound of |M| on [a.w, b.w] when both ends share a sign, from |M''| <= L2.
    double second_order_bound(const Sample& a, const Sample& b) const {
        const double s = static_cast<double>(sign_of(a.m));
        const double m0 = s * a.m, m1 = s * b.m, d0 = s * a.dm, d1 = s * b.dm;
        const double w = b.w - a.w, L2 = win_.m_curvature;
        auto f1 = [&](double t) { return m0 + d0 * t - 0.5 * L2 * t * t; };
        auto f2 = [&](double t) { return m1 - d1 * (w - t) - 0.5 * L2 * (w - t) * (w - t); };
        auto lb = [&](double t) { return std::max(f1(t), f2(t)); };
        double best = std::min(lb(0.0), lb(w));
        const double slope = d0 - d1 - L2 * w;
        if (slope != 0.0) {
            const double t = -(m0 - m1 + d1 * w + 0.5 * L2 * w * w) / slope;
            if (t > 0.0 && t < w) best = std::min(best, lb(t));
        }
        return best;
    }

    double polish(Sample a, Sample b) {
        // Illinois false position with a bisection fallback.
        double lo = a.w, hi = b.w, flo = a.m, fhi = b.m;
        int side = 0;
        for (int it = 0; it < 200 && hi - lo > cfg_.polish_tol; ++it) {
            double x = (lo * fhi - hi * flo) / (fhi - flo);
            if (!(x > lo && x < hi) || it % 4 == 3) x = 0.5 * (lo + hi);
            ++evals_;
            const double fx = f_.M(x);
            if (fx == 0.0) return x;
            if (sign_of(fx) == sign_of(flo)) {
                lo = x;
                flo = fx;
                if (side == -1) fhi *= 0.5;
                side = -1;
            } else {
                hi = x;
                fhi = fx;
                if (side == 1) flo *= 0.5;
                side = 1;
            }
        }
        return 0.5 * (lo + hi);
    }

    void simple_zero(const Sample& a, const Sample& b, bool proven_single) {
        const double w = polish(a, b);
        if (!proven_single) {
            const Sample s = sample(w);
            if (std::abs(s.dm) <= 1e-6 * std::max(win_.m_lipschitz, 1e-300)) {
                std::ostringstream msg;
                msg << "zero of M of multiplicity >= 3 suspected near omega = " << w;
                flag(msg.str());
            }
        }
        zeros_.push_back({w, 1, 0.0});
    }

    void tangential_zero(double w) {
        // Curvature by a central difference of M'.
        const double dw = std::max(1e-6, 1e-6 * w);
        const double c = (sample(w + dw).dm - sample(std::max(w - dw, 0.0)).dm) / (2.0 * dw);
        if (std::abs(c) <= 1e-6 * std::max(win_.m_curvature, 1e-300)) {
            std::ostringstream msg;
            msg << "zero of M of multiplicity >= 3 at omega = " << w;
            flag(msg.str());
        }
        zeros_.push_back({w, 2, 0.0});
    }

    void cell(const Sample& a, const Sample& b, int depth) {
        if (inconclusive_) return;
        const double w = b.w - a.w;
        const int sa = sign_of(a.m), sb = sign_of(b.m);
        if (sb == 0) {
            // Exact zero on the right end; the next cell starts from it.
            if (std::abs(b.dm) > cfg_.tangential_tol) zeros_.push_back({b.w, 1, 0.0});
            else tangential_zero(b.w);
            return;
        }
        if (sa == 0) {
            if (a.w == 0.0) return;  // the origin is handled by the Delta(0) test
            const Sample mid = sample(a.w + 0.5 * w);
            if (sign_of(mid.m) != sb) cell(mid, b, depth + 1);
            return;
        }
        if (sa != sb) {
            const bool monotone = sign_of(a.dm) == sign_of(b.dm) && sign_of(a.dm) != 0 &&
                                  std::abs(a.dm) + std::abs(b.dm) > win_.m_curvature * w;
            if (monotone) return simple_zero(a, b, true);
            if (w < cfg_.min_cell) return simple_zero(a, b, false);
            const Sample mid = sample(a.w + 0.5 * w);
            cell(a, mid, depth + 1);
            cell(mid, b, depth + 1);
            return;
        }
        // Same sign at both ends.
        if (std::abs(a.m) + std::abs(b.m) > win_.m_lipschitz * w) return;
        if (second_order_bound(a, b) > 0.0) return;

        const double s = static_cast<double>(sa);
        if (s * a.dm < 0.0 && s * b.dm > 0.0) {
            // |M| dips inside: locate the critical point.
            Sample lo = a, hi = b;
            for (int it = 0; it < 80 && hi.w - lo.w > 1e-14 * std::max(1.0, hi.w); ++it) {
                const Sample mid = sample(0.5 * (lo.w + hi.w));
                if (s * mid.dm < 0.0) lo = mid;
                else hi = mid;
            }
            const Sample c = sample(0.5 * (lo.w + hi.w));
            if (sign_of(c.m) != sa) {
                cell(a, c, depth + 1);
                cell(c, b, depth + 1);
                return;
            }
            if (std::abs(c.m) <= cfg_.tangential_tol) return tangential_zero(c.w);
            if (w < cfg_.min_cell) return;
            cell(a, c, depth + 1);
            cell(c, b, depth + 1);
            return;
        }
        if (w < cfg_.min_cell) {
            if (std::min(std::abs(a.m), std::abs(b.m)) <= cfg_.tangential_tol) {
                std::ostringstream msg;
                msg << "M nearly vanishes without a resolvable zero near omega = " << a.w;
                flag(msg.str());
            }
            return;
        }
        const Sample mid = sample(a.w + 0.5 * w);
        cell(a, mid, depth + 1);
        cell(mid, b, depth + 1);
    }

    const CharFn& f_;
    const FrequencyWindow& win_;
    const StabilityConfig& cfg_;
    std::vector<MZero> zeros_;
    bool inconclusive_ = false;
    std::string reason_;
    long evals_ = 0;
};

double imag_tolerance(const CharFn& f, const StabilityConfig& cfg) {
    return cfg.imag_root_rel_tol * f.scale();
}

}  // namespace

MZeroScan find_m_zeros(const CharFn& f, const FrequencyWindow& w, const StabilityConfig& cfg) {
    return MScanner(f, w, cfg).run();
}

int gamma_count(std::vector<MZero> zeros, double imag_tol) {
    std::sort(zeros.begin(), zeros.end(),
              [](const MZero& a, const MZero& b) { return a.omega > b.omega; });
    int gamma = 0, j = 0;
    for (const auto& z : zeros) {
        if (std::abs(z.s_value) < imag_tol) {
            std::ostringstream msg;
            msg << "Delta has a root on the imaginary axis near omega = " << z.omega;
            throw ImaginaryAxisRootError(z.omega, msg.str());
        }
        for (int r = 0; r < z.multiplicity; ++r, ++j) {
            const int term = sign_of(z.s_value);
            gamma += (j % 2 == 0) ? term : -term;
        }
    }
    return gamma;
}

StabilityReport analyze(const CharFn& f, const StabilityConfig& cfg) {
    StabilityReport r;
    r.tau = f.tau();
    r.xi = f.xi();
    r.kernel_kind = to_string(f.kernel().kind());
    r.kernel_integral = f.kernel_integral();
    r.kernel_l1 = f.kernel_l1();
    r.delta_at_zero = f.delta_at_zero();
    r.integral_condition_holds = r.delta_at_zero > 0.0;
    r.principal_part_ok = std::abs(f.xi()) < 1.0;
    r.config = cfg;
    r.quadrature = f.quadrature();

    if (!r.principal_part_ok) {
        r.verdict = {VerdictKind::Unstable, std::nullopt,
                     "principal part is not exponentially stable (|xi| >= 1)"};
        return r;
    }
    const NecessaryTest nt = necessary_test(f, cfg);
    if (nt.outcome == NecessaryOutcome::Boundary) {
        r.imaginary_roots = {0.0};
        r.verdict = {VerdictKind::MarginalImaginaryRoot, std::nullopt,
                     "Delta(0) = 0: root at the origin"};
        return r;
    }
    if (nt.outcome == NecessaryOutcome::FailAtZero) {
        r.verdict = {VerdictKind::Unstable, std::nullopt,
                     "Delta(0) < 0: integral condition fails, a positive real root exists"};
        return r;
    }

    r.window = frequency_window(f, cfg);
    const MZeroScan scan = find_m_zeros(f, *r.window, cfg);
    r.m_zeros = scan.zeros;
    r.m_evaluations = scan.evaluations;
    r.scan_step = scan.base_step;
    if (scan.inconclusive) {
        r.verdict = {VerdictKind::Inconclusive, std::nullopt, scan.reason};
        return r;
    }

    const double tol = imag_tolerance(f, cfg);
    for (const auto& z : r.m_zeros) {
        if (std::abs(z.s_value) < tol) {
            r.imaginary_roots.push_back(-z.omega);
            r.imaginary_roots.push_back(z.omega);
        }
    }
    std::sort(r.imaginary_roots.begin(), r.imaginary_roots.end());
    if (!r.imaginary_roots.empty()) {
        std::ostringstream msg;
        msg << "Delta vanishes on the imaginary axis at omega = +-" << r.imaginary_roots.back();
        r.verdict = {VerdictKind::MarginalImaginaryRoot, std::nullopt, msg.str()};
        return r;
    }

    r.gamma = gamma_count(r.m_zeros, tol);
    if (*r.gamma == 0) {
        r.verdict = {VerdictKind::Stable, 0, "no roots in the closed right half-plane"};
    } else if (*r.gamma > 0) {
        std::ostringstream msg;
        msg << *r.gamma << " root(s) with positive real part";
        r.verdict = {VerdictKind::Unstable, *r.gamma, msg.str()};
    } else {
        r.verdict = {VerdictKind::Inconclusive, std::nullopt,
                     "negative counting number: a zero of M was missed"};
    }
    return r;
}

// ---------------------------------------------------------------------------------------------

Polynomial modulus_gap_polynomial(const QuasiPolyForm& qp) {
    // P(i w) = Re(x) + i w Im(x) with x = w^2.
    auto squared_modulus = [](const Polynomial& p) {
        std::vector<double> re, im;
        for (std::size_t k = 0; k < p.size(); ++k) {
            const double sgn = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
            if (k % 2 == 0) re.push_back(sgn * p[k]);
            else im.push_back(sgn * p[k]);
        }
        if (re.empty()) re.push_back(0.0);
        if (im.empty()) im.push_back(0.0);
        const Polynomial R(re), I(im);
        return R * R + Polynomial({0.0, 1.0}) * (I * I);
    };
    return squared_modulus(qp.p0_num) + (-1.0) * squared_modulus(qp.p1_num);
}

namespace {

const Polynomial& truncation_poly(const KernelSpec& k, int order) {
    if (k.truncation_order() != order) {
        std::ostringstream msg;
        msg << "expected a truncation of order " << order;
        throw VariantError(msg.str());
    }
    return *k.polynomial();
}

void check_hypotheses(double xi, double delta0) {
    if (!(std::abs(xi) < 1.0)) throw DomainError("hypothesis violated: |xi| < 1 is required");
    if (!(delta0 > 0.0)) {
        throw DomainError("hypothesis violated: the integral condition Delta(0) > 0 is required");
    }
}

std::vector<double> symmetric_omegas(const std::vector<double>& xs) {
    std::vector<double> out;
    for (double x : xs) {
        if (x <= 0.0) continue;
        out.push_back(-std::sqrt(x));
        out.push_back(std::sqrt(x));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> residuals_at(const KernelSpec& k, double xi, const std::vector<double>& omegas) {
    const CharFn f(xi, k);
    std::vector<double> out;
    for (double w : omegas) out.push_back(std::abs(f.delta(cplx(0.0, w))));
    return out;
}

}  // namespace

P0Candidates p0_imaginary_candidates(const KernelSpec& k, double xi) {
    const Polynomial& poly = truncation_poly(k, 0);
    const double tau = k.tau();
    P0Candidates out;
    out.delta_at_zero = 1.0 - xi - poly.integral(0.0, tau);
    check_hypotheses(xi, out.delta_at_zero);
    const auto nt = derivatives_at_tau(k, 1);
    const double a0 = poly[0], a1 = poly[1], a3 = poly[3];
    out.A = 1.0 - xi * xi;
    out.B0 = a0 * a0 + 2.0 * a1 - nt[0] * nt[0] - 2.0 * xi * nt[1];
    const double c = -12.0 * a3 * out.delta_at_zero;
    out.D = out.B0 * out.B0 + 48.0 * a3 * out.A * out.delta_at_zero;
    std::vector<double> xs;
    if (out.D >= 0.0) {
        const double sq = std::sqrt(out.D);
        const double qq = -0.5 * (out.B0 + (out.B0 >= 0.0 ? sq : -sq));
        if (qq != 0.0) {
            xs.push_back(qq / out.A);
            xs.push_back(c / qq);
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    out.omegas = symmetric_omegas(xs);
    out.residuals = residuals_at(k, xi, out.omegas);
    return out;
}

P1Tests p1_imaginary_tests(const KernelSpec& k, double xi) {
    const Polynomial& poly = truncation_poly(k, 1);
    const double tau = k.tau();
    P1Tests out;
    out.delta_at_zero = 1.0 - xi - poly.integral(0.0, tau);
    check_hypotheses(xi, out.delta_at_zero);
    const auto nt = derivatives_at_tau(k, 3);
    const double a0 = poly[0], a1 = poly[1], a2 = poly[2], a3 = poly[3], a5 = poly[5];
    out.A = 1.0 - xi * xi;
    out.B = a0 * a0 + 2.0 * a1 - nt[0] * nt[0] - 2.0 * xi * nt[1];
    out.C = a1 * a1 - 12.0 * a3 - 4.0 * a0 * a2 - nt[1] * nt[1] + 2.0 * xi * nt[3] +
            2.0 * nt[0] * nt[2];
    out.E = 240.0 * a5 * out.delta_at_zero;
    const double A = out.A, B = out.B, C = out.C, E = out.E;
    out.delta = 18.0 * A * B * C * E - 4.0 * B * B * B * E + B * B * C * C - 4.0 * A * C * C * C -
                27.0 * A * A * E * E;
    out.Q = B / (27.0 * A) * (2.0 * B * B / (A * A) - 9.0 * C / A) + E / A;
    out.at_most_two = out.delta < 0.0;
    out.none = out.Q >= 0.0;

    const Polynomial cubic({E, C, B, A});
    const double bound = 1.0 + std::max({std::abs(B / A), std::abs(C / A), std::abs(E / A)});
    std::vector<double> xs;
    for (double x : real_roots(cubic, 0.0, bound)) {
        if (x > 0.0) xs.push_back(x);
    }
    out.omegas = symmetric_omegas(xs);
    out.residuals = residuals_at(k, xi, out.omegas);
    return out;
}

// ---------------------------------------------------------------------------------------------

TruncationCertificate truncation_certificate(const CharFn& exact, int p0, const StabilityConfig& cfg) {
    const DerivedConstants* consts = exact.kernel().constants();
    if (!consts) throw VariantError("truncation certificate needs a kernel built from system constants");
    TruncationCertificate out;
    out.p0 = p0;
    const KernelSpec np = truncate(*consts, p0);
    const CharFn fp(exact.xi(), np, exact.quadrature());
    out.truncated_report = analyze(fp, cfg);
    out.l1_gap = l1_distance(exact.kernel(), np, exact.quadrature());
    if (out.truncated_report.verdict.kind != VerdictKind::Stable) {
        out.reason = std::string("truncated characteristic function is not stable (") +
                     to_string(out.truncated_report.verdict.kind) + ")";
        return out;
    }

    // Boundary lower bound: Lipschitz interpolation between samples of |Delta_p0(i w)|.
    const FrequencyWindow& win = *out.truncated_report.window;
    const double L = win.m_lipschitz;
    auto mod = [&fp](double w) { return std::abs(fp.delta(cplx(0.0, w))); };
    const double h0 = std::min(fp.tau(), 1.0) / 64.0 / std::max(1, cfg.grid_refine);
    const long cells = static_cast<long>(std::ceil(win.omega_max / h0));
    double lower = std::numeric_limits<double>::infinity();
    out.boundary_min = std::numeric_limits<double>::infinity();
    auto note = [&](double w, double v) {
        if (v < out.boundary_min) {
            out.boundary_min = v;
            out.argmin_omega = w;
        }
    };
    struct Cell {
        double a, b, fa, fb;
        int depth;
    };
    std::vector<Cell> stack;
    double wa = 0.0, fa = mod(0.0);
    note(wa, fa);
    for (long i = 1; i <= cells; ++i) {
        const double wb = (i == cells) ? win.omega_max : h0 * static_cast<double>(i);
        const double fb = mod(wb);
        note(wb, fb);
        stack.push_back({wa, wb, fa, fb, 0});
        while (!stack.empty()) {
            const Cell c = stack.back();
            stack.pop_back();
            const double lb = 0.5 * (c.fa + c.fb - L * (c.b - c.a));
            if (lb >= 0.98 * std::min(c.fa, c.fb) || c.depth >= 30) {
                lower = std::min(lower, lb);
                continue;
            }
            const double m = 0.5 * (c.a + c.b), fm = mod(m);
            note(m, fm);
            stack.push_back({c.a, m, c.fa, fm, c.depth + 1});
            stack.push_back({m, c.b, fm, c.fb, c.depth + 1});
        }
        wa = wb;
        fa = fb;
    }
    const double tail = 1.0 - std::abs(fp.xi()) - win.tail_constant / win.omega_max;
    // |Delta_p0| -> 1 as Re s -> +infinity; with no zeros in Re s >= 0, the infimum over the
    // half-plane is bounded below by the boundary infimum and that limit.
    out.epsilon0 = std::min({lower, tail, 1.0});
    out.certified = out.epsilon0 > 0.0 && out.l1_gap < out.epsilon0;
    std::ostringstream msg;
    if (out.certified) msg << "certified: ||N - N_p0||_L1 = " << out.l1_gap << " < " << out.epsilon0;
    else msg << "not certified: ||N - N_p0||_L1 = " << out.l1_gap << " >= " << out.epsilon0;
    out.reason = msg.str();
    return out;
}

std::optional<TruncationCertificate> smallest_certificate(const CharFn& exact, int max_p,
                                                          const StabilityConfig& cfg) {
    for (int p = 0; p <= max_p; ++p) {
        TruncationCertificate c = truncation_certificate(exact, p, cfg);
        if (c.certified) return c;
    }
    return std::nullopt;
}

}  // namespace hypstab
