#pragma once

#include <stdexcept>
#include <string>

namespace hypstab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid physical or numerical parameter. `field()` names the offending input.
class ParameterError : public Error {
public:
    ParameterError(std::string field, const std::string& message)
        : Error(message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Argument outside the domain of a function (e.g. kernel evaluated off [0, tau]).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A series, quadrature or iteration did not reach its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Floating-point range exceeded while summing a series.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Operation needs a different kernel representation than the one supplied.
class VariantError : public Error {
public:
    using Error::Error;
};

/// Contour passes too close to a zero of the analytic function.
class BoundaryTooCloseError : public Error {
public:
    using Error::Error;
};

/// A characteristic root sits on the imaginary axis; counting formula does not apply.
class ImaginaryAxisRootError : public Error {
public:
    ImaginaryAxisRootError(double omega, const std::string& message)
        : Error(message), omega_(omega) {}
    double omega() const noexcept { return omega_; }

private:
    double omega_;
};

}  // namespace hypstab
