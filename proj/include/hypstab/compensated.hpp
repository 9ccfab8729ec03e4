#pragma once

#include <cmath>
#include <complex>

namespace hypstab {

/// Neumaier variant of Kahan summation. Works for double and std::complex<double>.
template <class T>
class CompensatedSum {
public:
    void add(T x) {
        T t = sum_ + x;
        comp_ += compensation(sum_, x, t);
        sum_ = t;
    }
    T value() const { return sum_ + comp_; }

private:
    static double compensation(double s, double x, double t) {
        return std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    }
    static std::complex<double> compensation(std::complex<double> s, std::complex<double> x,
                                             std::complex<double> t) {
        return {compensation(s.real(), x.real(), t.real()),
                compensation(s.imag(), x.imag(), t.imag())};
    }

    T sum_{};
    T comp_{};
};

}  // namespace hypstab
