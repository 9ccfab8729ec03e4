#pragma once

#include <complex>
#include <span>
#include <vector>

namespace hypstab {

/// Real polynomial in the monomial basis, coefficients ordered by increasing power.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

    static Polynomial constant(double c) { return Polynomial({c}); }

    const std::vector<double>& coeffs() const { return c_; }
    std::size_t size() const { return c_.size(); }
    bool empty() const { return c_.empty(); }
    /// Index of the highest stored coefficient (stored zeros count). -1 when empty.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    double operator[](std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }

    double operator()(double x) const;
    std::complex<double> operator()(std::complex<double> z) const;

    Polynomial derivative() const;
    /// k-th derivative evaluated at x.
    double derivative_at(int order, double x) const;
    /// Exact definite integral over [lo, hi] from the antiderivative.
    double integral(double lo, double hi) const;
    /// Exact integral of x * p(x) over [lo, hi].
    double first_moment(double lo, double hi) const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator*=(double s);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

    /// Pads with zeros up to `n` coefficients (never truncates).
    void resize_at_least(std::size_t n);

private:
    std::vector<double> c_;
};

/// Real roots of `p` in [lo, hi], isolated between the real roots of p' and polished by
/// bisection. A root of even multiplicity is reported once, when |p| vanishes to `tol`
/// relative to the coefficient scale at a critical point.
std::vector<double> real_roots(const Polynomial& p, double lo, double hi, double tol = 1e-14);

}  // namespace hypstab
