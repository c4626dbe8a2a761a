#pragma once

#include <optional>

namespace fastharq::specfun {

/// Requested accuracy for the series/expansion kernels below.
struct Accuracy {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;

    /// Throws InvalidArgument unless both tolerances are strictly positive.
    void validate() const;
};

/// Hard cap on series terms; reaching it raises NumericalError carrying the partial sum.
inline constexpr int kMaxSeriesTerms = 10000;

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
double q_function(double x);

/// Modified Bessel function of the first kind I_n(x), x >= 0.
/// Throws OverflowError when the result exceeds the double range; use bessel_i_scaled.
double bessel_i(int n, double x, Accuracy acc = {});

/// Exponentially scaled e^{-x} I_n(x).
double bessel_i_scaled(int n, double x, Accuracy acc = {});

/// log I_n(x); returns -inf for I_n(0) with n >= 1. Never overflows or underflows
/// for the arguments seen in sum-gain densities (orders in the hundreds).
double log_bessel_i(int n, double x, Accuracy acc = {});

/// Confluent hypergeometric 1F1(a; b; x). b must not be a nonpositive integer.
double kummer_1f1(double a, double b, double x, Accuracy acc = {});

/// Upper incomplete gamma function Gamma(s, x) (unregularized).
double upper_gamma(double s, double x, Accuracy acc = {});

/// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s).
double gamma_p(double s, double x, Accuracy acc = {});

/// Regularized upper incomplete gamma Q(s, x) = Gamma(s, x) / Gamma(s).
double gamma_q(double s, double x, Accuracy acc = {});

namespace detail {

struct BranchValue {
    double value;           ///< e^{-x} I_n(x)
    double error_estimate;  ///< relative truncation estimate
};

/// Power series for e^{-x} I_n(x); all terms positive, accurate for every x within the term cap.
double bessel_i_scaled_series(int n, double x, Accuracy acc = {});

/// log I_n(x) from the power series, evaluated with a running exponent so nothing overflows.
double log_bessel_i_series(int n, double x, Accuracy acc = {});

/// Large-x Hankel expansion truncated at its smallest term. Empty when the
/// expansion diverges before the terms drop below the requested tolerance
/// and `require_converged` is set.
std::optional<BranchValue> bessel_i_scaled_asymptotic(int n, double x, Accuracy acc = {},
                                                      bool require_converged = true);

}  // namespace detail

}  // namespace fastharq::specfun
