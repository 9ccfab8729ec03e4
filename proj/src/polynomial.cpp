#include "hypstab/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace hypstab {

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> z) const {
    std::complex<double> acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return Polynomial({0.0});
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
}

double Polynomial::derivative_at(int order, double x) const {
    Polynomial p = *this;
    for (int i = 0; i < order; ++i) p = p.derivative();
    return p(x);
}

double Polynomial::integral(double lo, double hi) const {
    double a = 0.0, b = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) {
        const double coef = c_[k] / static_cast<double>(k + 1);
        a = a * lo + coef;
        b = b * hi + coef;
    }
    return b * hi - a * lo;
}

double Polynomial::first_moment(double lo, double hi) const {
    std::vector<double> shifted(c_.size() + 1, 0.0);
    std::copy(c_.begin(), c_.end(), shifted.begin() + 1);
    return Polynomial(std::move(shifted)).integral(lo, hi);
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    resize_at_least(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
}

Polynomial& Polynomial::operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.empty() || b.empty()) return Polynomial();
    std::vector<double> out(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(out));
}

void Polynomial::resize_at_least(std::size_t n) {
    if (c_.size() < n) c_.resize(n, 0.0);
}

namespace {

double bisect(const Polynomial& p, double lo, double hi, double flo) {
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = p(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Polynomial trimmed(const Polynomial& p) {
    std::vector<double> c = p.coeffs();
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    return Polynomial(std::move(c));
}

}  // namespace

std::vector<double> real_roots(const Polynomial& input, double lo, double hi, double tol) {
    const Polynomial p = trimmed(input);
    std::vector<double> roots;
    if (p.degree() < 1) return roots;
    if (p.degree() == 1) {
        const double r = -p[0] / p[1];
        if (r >= lo && r <= hi) roots.push_back(r);
        return roots;
    }
    // Rounding scale of p at x: sum |c_k| |x|^k.
    auto value_tol = [&](double x) {
        double acc = 0.0;
        for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) {
            acc = acc * std::abs(x) + std::abs(*it);
        }
        return tol * acc;
    };

    std::vector<double> knots{lo};
    for (double c : real_roots(p.derivative(), lo, hi, tol)) {
        if (c > lo && c < hi) knots.push_back(c);
    }
    knots.push_back(hi);

    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double a = knots[i], b = knots[i + 1];
        const double fa = p(a), fb = p(b);
        if (fa == 0.0) {
            roots.push_back(a);
        } else if (fa * fb < 0.0) {
            roots.push_back(bisect(p, a, b, fa));
        } else if (i > 0 && std::abs(fa) <= value_tol(a)) {
            roots.push_back(a);  // touching root at an interior critical point
        }
    }
    if (p(hi) == 0.0) roots.push_back(hi);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double x, double y) { return std::abs(x - y) <= 1e-14 * (1 + std::abs(x)); }),
                roots.end());
    return roots;
}

}  // namespace hypstab
