#pragma once

#include <stdexcept>
#include <string>

namespace rabi {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition (bad parameter, bad range).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Arithmetic breakdown: near-zero denominators, overflow, refused evaluations.
class NumericError : public Error {
public:
    using Error::Error;
};

// Evaluation point lies inside the exclusion radius of a pole of some f_n.
class PoleError : public NumericError {
public:
    PoleError(const std::string& what, double x, double pole)
        : NumericError(what), x_(x), pole_(pole) {}

    double x() const noexcept { return x_; }
    double pole() const noexcept { return pole_; }

private:
    double x_;
    double pole_;
};

// g = 0 reached a code path that divides by the coupling.
class SingularParameterError : public NumericError {
public:
    using NumericError::NumericError;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, int iterations)
        : Error(what), iterations_(iterations) {}

    int iterations() const noexcept { return iterations_; }

private:
    int iterations_;
};

}  // namespace rabi
