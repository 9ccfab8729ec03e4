#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <vector>

#include "hypstab/compensated.hpp"
#include "hypstab/errors.hpp"

namespace hypstab {

struct QuadratureConfig {
    int base_nodes = 64;
    int max_doublings = 6;
    double rel_tol = 1e-12;
};

void check_config(const QuadratureConfig& qc);

/// Gauss-Legendre nodes and weights on [-1, 1]. Cached per node count; thread-safe.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

/// Node count used at refinement level `level` (0 = base).
inline int nodes_at_level(const QuadratureConfig& qc, int level) { return qc.base_nodes << level; }

/// Fixed-order Gauss-Legendre integral of f over [lo, hi].
template <class F>
auto gauss_integrate(F&& f, double lo, double hi, int n) {
    const GaussRule& rule = gauss_legendre(n);
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    using T = decltype(f(mid));
    CompensatedSum<T> acc;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc.add(rule.weights[i] * f(mid + half * rule.nodes[i]));
    }
    return T(half * acc.value());
}

/// Gauss-Legendre with node doubling until two successive estimates agree to
/// rel_tol * max(|estimate|, abs_floor). Throws ConvergenceError with the last two estimates.
template <class F>
auto adaptive_integrate(F&& f, double lo, double hi, const QuadratureConfig& qc,
                        double abs_floor = 0.0) {
    auto prev = gauss_integrate(f, lo, hi, nodes_at_level(qc, 0));
    for (int level = 1; level <= qc.max_doublings; ++level) {
        auto cur = gauss_integrate(f, lo, hi, nodes_at_level(qc, level));
        const double scale = std::max(std::abs(cur), abs_floor);
        if (std::abs(cur - prev) <= qc.rel_tol * scale) return cur;
        if (level == qc.max_doublings) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "quadrature did not converge after " << qc.max_doublings
                << " doublings; last two estimates " << prev << " and " << cur;
            throw ConvergenceError(msg.str());
        }
        prev = cur;
    }
    return prev;
}

/// Points in (lo, hi) where f changes sign: uniform scan with `scan_cells` cells,
/// each crossing polished by bisection.
std::vector<double> sign_changes(const std::function<double(double)>& f, double lo, double hi,
                                 int scan_cells = 512);

/// L1 norm of f on [lo, hi]: split at sign changes, adaptive Gauss-Legendre on each piece.
double l1_norm(const std::function<double(double)>& f, double lo, double hi,
               const QuadratureConfig& qc);

}  // namespace hypstab
