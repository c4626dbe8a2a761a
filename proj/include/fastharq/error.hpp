#pragma once

#include <stdexcept>
#include <string>

namespace fastharq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or an unsupported model combination.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A numerical kernel failed to reach its requested accuracy.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, double estimate, double error_bound = 0.0)
        : Error(what), estimate_(estimate), error_bound_(error_bound) {}

    /// Best value available when the kernel gave up (partial sum, partial integral).
    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

/// Result would not fit in a double; the caller should use a scaled or log variant.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// The error-probability target cannot be met under the PA output-power limit.
class Infeasible : public Error {
public:
    Infeasible(const std::string& what, double p_cons, double output_power)
        : Error(what), p_cons_(p_cons), output_power_(output_power) {}

    double p_cons() const noexcept { return p_cons_; }
    double output_power() const noexcept { return output_power_; }

private:
    double p_cons_;
    double output_power_;
};

/// The error probability at the ends of the power search bracket does not straddle the target.
class NonBracketed : public Error {
public:
    using Error::Error;
};

/// Success probability too small to condition on.
class DegenerateSuccess : public Error {
public:
    using Error::Error;
};

}  // namespace fastharq
