#include "hypstab/criteria.hpp"

#include <algorithm>
#include <cmath>

#include "hypstab/special.hpp"

namespace hypstab {

const char* to_string(CriterionStatus s) {
    switch (s) {
        case CriterionStatus::Satisfied: return "satisfied";
        case CriterionStatus::NotSatisfied: return "not_satisfied";
        case CriterionStatus::NotApplicable: return "not_applicable";
    }
    return "unknown";
}

double bastin_coron_offdiagonal(const HyperbolicSystem& sys, double p1, double p2) {
    return -(p1 * sys.sigma_plus + p2 * sys.sigma_minus);
}

double bastin_coron_norm(const HyperbolicSystem& sys, double p1, double p2) {
    const double r = std::sqrt(p1 * sys.lambda / (p2 * sys.mu));
    return std::max(std::abs(sys.q) * r, std::abs(sys.rho) / r);
}

BastinCoronResult bastin_coron(const HyperbolicSystem& sys) {
    BastinCoronResult out;
    const double sp = sys.sigma_plus, sm = sys.sigma_minus;
    double ratio = 0.0;
    if (sp == 0.0 && sm == 0.0) {
        // Any weight makes the symmetric part vanish; pick the best r.
        double r = 1.0;
        if (std::max(std::abs(sys.q), std::abs(sys.rho)) >= 1.0) {
            r = sys.rho == 0.0 ? 0.5 / std::abs(sys.q) : std::sqrt(std::abs(sys.rho) / std::abs(sys.q));
        }
        ratio = r * r * sys.mu / sys.lambda;
        out.note = "zero couplings: weight ratio is free";
    } else if (sp * sm < 0.0) {
        ratio = -sm / sp;
        out.note = "weight ratio fixed by p1 sigma+ + p2 sigma- = 0";
    } else {
        out.note = sp * sm > 0.0 ? "sigma+ sigma- > 0: no positive diagonal P makes M^T P + P M PSD"
                                 : "exactly one coupling vanishes: no positive diagonal P makes M^T P + P M PSD";
        return out;
    }
    out.r = std::sqrt(ratio * sys.lambda / sys.mu);
    out.norm = bastin_coron_norm(sys, ratio, 1.0);
    out.satisfied = out.norm < 1.0;
    if (out.satisfied) out.ratio = ratio;
    return out;
}

SabaResult saba(const HyperbolicSystem& sys) {
    const DerivedConstants c = derive_constants(sys);
    const double coupling = sys.sigma_plus * sys.sigma_minus;
    const double rq = sys.rho * sys.q;
    const double x = std::abs(rq);
    const double abs_a = std::abs(c.a), abs_r = std::abs(c.R);
    SabaResult out;
    out.boundary_case = coupling == 0.0;
    const bool same_sign = coupling >= 0.0;
    const double gain = rq >= 0.0 ? 1.0 / (1.0 + x) - 0.5 * (1.0 - x) : 0.5 * (1.0 + x);
    if (same_sign) {
        out.case_index = rq >= 0.0 ? 1 : 2;
        out.lhs = abs_a + abs_r * gain;
    } else {
        out.case_index = rq >= 0.0 ? 3 : 4;
        const double root = std::sqrt(abs_r);
        const double i0 = special::bessel_i(0, root), i2 = special::bessel_i(2, root);
        out.lhs = abs_a * i0 + abs_r * gain * (i0 - i2);
    }
    out.rhs = 1.0 - x;
    out.satisfied = out.lhs < out.rhs;
    return out;
}

namespace {

double iss_lhs(const HyperbolicSystem& sys, double k) {
    const double g = std::exp(k) * std::expm1(k) / k;
    return (std::sqrt(g * std::abs(sys.sigma_minus) / sys.lambda) + std::sqrt(std::abs(sys.rho))) *
           (std::sqrt(g * std::abs(sys.sigma_plus) / sys.mu) + std::sqrt(std::abs(sys.q)));
}

}  // namespace

IssResult iss_small_gain(const HyperbolicSystem& sys, int grid_points, double k_min, double k_max) {
    IssResult out;
    out.k_min = k_min;
    out.k_max = k_max;
    const double gains = std::abs(sys.rho) + std::abs(sys.q);
    auto admissible = [&](double k) { return gains * std::exp(-k) < 1.0; };

    std::vector<double> grid(grid_points);
    const double ratio = std::log(k_max / k_min);
    for (int i = 0; i < grid_points; ++i) {
        grid[i] = k_min * std::exp(ratio * i / std::max(1, grid_points - 1));
    }
    int best = -1;
    for (int i = 0; i < grid_points; ++i) {
        if (!admissible(grid[i])) continue;
        const double v = iss_lhs(sys, grid[i]);
        if (best < 0 || v < out.best_value) {
            best = i;
            out.best_value = v;
        }
    }
    if (best < 0) return out;
    out.feasible = true;
    out.best_k = grid[best];

    // Golden section on the neighbouring grid cells, kept inside the admissible set.
    double lo = grid[std::max(best - 1, 0)], hi = grid[std::min(best + 1, grid_points - 1)];
    if (gains > 1.0) lo = std::max(lo, std::nextafter(std::log(gains), k_max));
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = iss_lhs(sys, x1), f2 = iss_lhs(sys, x2);
    for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = iss_lhs(sys, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = iss_lhs(sys, x2);
        }
    }
    for (double k : {lo, hi, 0.5 * (lo + hi)}) {
        if (!admissible(k)) continue;
        const double v = iss_lhs(sys, k);
        if (v < out.best_value) {
            out.best_value = v;
            out.best_k = k;
        }
    }
    out.satisfied = out.best_value < 1.0;
    if (out.satisfied) out.witness_k = out.best_k;
    return out;
}

CriterionStatus corollary_status(const StabilityReport& r) {
    switch (r.verdict.kind) {
        case VerdictKind::Stable: return CriterionStatus::Satisfied;
        case VerdictKind::Unstable: return CriterionStatus::NotSatisfied;
        default: return CriterionStatus::NotApplicable;
    }
}

CriteriaRow compare_all(const HyperbolicSystem& sys, const StabilityConfig& cfg,
                        const QuadratureConfig& qc) {
    CriteriaRow row;
    row.system = sys;
    row.constants = derive_constants(sys);
    const CharFn f(row.constants.xi, KernelSpec::closed_form(row.constants), qc);
    row.report = analyze(f, cfg);
    row.corollary = corollary_status(row.report);
    row.bastin = bastin_coron(sys);
    row.saba = saba(sys);
    row.iss = iss_small_gain(sys);
    return row;
}

}  // namespace hypstab
