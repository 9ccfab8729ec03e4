#include "hypstab/quadrature.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace hypstab {

void check_config(const QuadratureConfig& qc) {
    if (qc.base_nodes < 8) throw ParameterError("base_nodes", "base_nodes must be at least 8");
    if (qc.max_doublings < 0) {
        throw ParameterError("max_doublings", "max_doublings must be nonnegative");
    }
    if (!(qc.rel_tol > 0.0)) throw ParameterError("rel_tol", "rel_tol must be positive");
}

namespace {

GaussRule compute_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            // Recompute the derivative at the converged node.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw ParameterError("nodes", "Gauss-Legendre node count must be positive");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussRule>(compute_rule(n));
    return *slot;
}

std::vector<double> sign_changes(const std::function<double(double)>& f, double lo, double hi,
                                 int scan_cells) {
    std::vector<double> out;
    const double h = (hi - lo) / scan_cells;
    double x0 = lo, f0 = f(lo);
    for (int i = 1; i <= scan_cells; ++i) {
        const double x1 = (i == scan_cells) ? hi : lo + i * h;
        const double f1 = f(x1);
        if (f0 != 0.0 && f1 != 0.0 && (f0 < 0.0) != (f1 < 0.0)) {
            double a = x0, b = x1, fa = f0;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                if (m <= a || m >= b) break;
                const double fm = f(m);
                if (fm == 0.0) {
                    a = b = m;
                    break;
                }
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            out.push_back(0.5 * (a + b));
        } else if (f1 == 0.0 && i < scan_cells) {
            out.push_back(x1);
        }
        x0 = x1;
        f0 = f1;
    }
    return out;
}

double l1_norm(const std::function<double(double)>& f, double lo, double hi,
               const QuadratureConfig& qc) {
    std::vector<double> cuts{lo};
    for (double c : sign_changes(f, lo, hi)) cuts.push_back(c);
    cuts.push_back(hi);
    // Pieces are converged relative to the total mass, not their own (possibly tiny) size.
    const double mass = gauss_integrate([&f](double x) { return std::abs(f(x)); }, lo, hi,
                                        nodes_at_level(qc, qc.max_doublings));
    CompensatedSum<double> total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        const double piece = adaptive_integrate(f, cuts[i], cuts[i + 1], qc, mass);
        total.add(std::abs(piece));
    }
    return total.value();
}

}  // namespace hypstab
