#include "hypstab/special.hpp"

#include <cmath>
#include <sstream>

#include "hypstab/compensated.hpp"
#include "hypstab/errors.hpp"

namespace hypstab::special {
namespace {

// Sums t_0 + t_1 + ... with t_{p+1} = t_p * ratio(p). `growth` is |h|, the size of the
// argument that controls where terms stop growing (around p ~ sqrt(growth)).
template <class Ratio>
double sum_series(double first, Ratio ratio, double growth, double arg, const SeriesConfig& cfg) {
    CompensatedSum<double> acc;
    double term = first;
    const double peak = std::sqrt(growth) + 1.0;
    for (int p = 0; p < cfg.max_terms; ++p) {
        if (!std::isfinite(term)) {
            std::ostringstream msg;
            msg << "series term overflow at argument " << arg
                << " (terms exceed double range for |h| above roughly 1.25e5)";
            throw OverflowError(msg.str());
        }
        acc.add(term);
        if (term == 0.0) return acc.value();
        if (p >= peak && std::abs(term) <= cfg.rel_term_tol * std::abs(acc.value())) {
            return acc.value();
        }
        term *= ratio(p);
    }
    std::ostringstream msg;
    msg << "series did not converge within " << cfg.max_terms << " terms at argument " << arg;
    throw ConvergenceError(msg.str());
}

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(what) + ": argument must be finite");
    }
}

}  // namespace

double j0_entire(double h, const SeriesConfig& cfg) {
    require_finite(h, "j0_entire");
    return sum_series(
        1.0, [h](int p) { return -h / ((p + 1.0) * (p + 1.0)); }, std::abs(h), h, cfg);
}

double j2_entire(double h, const SeriesConfig& cfg) {
    require_finite(h, "j2_entire");
    return sum_series(
        h / 2.0, [h](int p) { return -h / ((p + 1.0) * (p + 3.0)); }, std::abs(h), h, cfg);
}

double j0_entire_deriv(double h, const SeriesConfig& cfg) {
    require_finite(h, "j0_entire_deriv");
    return sum_series(
        -1.0, [h](int p) { return -h / ((p + 1.0) * (p + 2.0)); }, std::abs(h), h, cfg);
}

double j2_entire_deriv(double h, const SeriesConfig& cfg) {
    require_finite(h, "j2_entire_deriv");
    return sum_series(
        0.5, [h](int p) { return -h * (p + 2.0) / ((p + 1.0) * (p + 1.0) * (p + 3.0)); },
        std::abs(h), h, cfg);
}

double bessel_i(int order, double x, const SeriesConfig& cfg) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw DomainError("bessel_i: argument must be finite and nonnegative");
    }
    const double half = 0.5 * x;
    const double quarter_sq = half * half;
    switch (order) {
        case 0:
            return sum_series(
                1.0, [quarter_sq](int p) { return quarter_sq / ((p + 1.0) * (p + 1.0)); },
                quarter_sq, x, cfg);
        case 2:
            return sum_series(
                quarter_sq / 2.0,
                [quarter_sq](int p) { return quarter_sq / ((p + 1.0) * (p + 3.0)); }, quarter_sq,
                x, cfg);
        default:
            throw DomainError("bessel_i: only orders 0 and 2 are supported");
    }
}

}  // namespace hypstab::special
