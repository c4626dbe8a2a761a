#include "fastharq/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fastharq/error.hpp"

namespace fastharq::specfun {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Terms are summed until the tail falls well below the requested tolerance.
double series_eps(const Accuracy& acc) { return std::max(acc.rel_tol * 1e-3, 1e-17); }

bool is_nonpositive_integer(double v) { return v <= 0.0 && v == std::floor(v); }

[[noreturn]] void fail_cap(const char* what, double partial) {
    throw NumericalError(std::string(what) + ": series did not converge within " +
                             std::to_string(kMaxSeriesTerms) + " terms",
                         partial);
}

double log_gamma_prefactor(double s, double x) { return -x + s * std::log(x) - std::lgamma(s); }

// P(s, x) by its power series; valid (and used) for x < s + 1.
double gamma_p_series(double s, double x, const Accuracy& acc) {
    const double eps = series_eps(acc);
    double ap = s;
    double del = 1.0 / s;
    double sum = del;
    for (int n = 0; n < kMaxSeriesTerms; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * eps) {
            return sum * std::exp(log_gamma_prefactor(s, x));
        }
    }
    fail_cap("gamma_p", sum * std::exp(log_gamma_prefactor(s, x)));
}

// Q(s, x) by the Legendre continued fraction (modified Lentz); used for x >= s + 1.
double gamma_q_fraction(double s, double x, const Accuracy& acc) {
    constexpr double tiny = 1e-300;
    const double eps = series_eps(acc);
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxSeriesTerms; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) {
            return std::exp(log_gamma_prefactor(s, x)) * h;
        }
    }
    fail_cap("gamma_q", std::exp(log_gamma_prefactor(s, x)) * h);
}

void check_gamma_args(double s, double x) {
    if (!(s > 0.0)) throw InvalidArgument("incomplete gamma: s must be > 0");
    if (!(x >= 0.0)) throw InvalidArgument("incomplete gamma: x must be >= 0");
}

void check_bessel_args(int n, double x) {
    if (n < 0) throw InvalidArgument("bessel_i: order must be nonnegative");
    if (!(x >= 0.0)) throw InvalidArgument("bessel_i: argument must be >= 0");
}

// Series for 1F1 with no transformation applied.
double kummer_series(double a, double b, double x, const Accuracy& acc) {
    const double eps = series_eps(acc);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < kMaxSeriesTerms; ++k) {
        term *= (a + k) * x / ((b + k) * (k + 1));
        sum += term;
        if (term == 0.0) return sum;  // terminating polynomial
        const double next_ratio = std::abs((a + k + 1) * x / ((b + k + 1) * (k + 2)));
        if (next_ratio < 1.0 &&
            std::abs(term) * next_ratio / (1.0 - next_ratio) <=
                std::max(eps * std::abs(sum), acc.abs_tol * 1e-3)) {
            return sum;
        }
    }
    fail_cap("kummer_1f1", sum);
}

}  // namespace

void Accuracy::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
        throw InvalidArgument("Accuracy: tolerances must be strictly positive");
    }
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

namespace detail {

double log_bessel_i_series(int n, double x, Accuracy acc) {
    check_bessel_args(n, x);
    acc.validate();
    if (x == 0.0) return n == 0 ? 0.0 : -kInf;

    constexpr double rescale = 1e280;
    const double log_rescale = std::log(rescale);
    const double eps = series_eps(acc);
    const double y = 0.25 * x * x;
    const double log_first = n * std::log(0.5 * x) - std::lgamma(n + 1.0);

    double term = 1.0;
    double sum = 1.0;
    double offset = 0.0;
    for (int k = 1; k < kMaxSeriesTerms; ++k) {
        term *= y / (static_cast<double>(k) * (n + k));
        sum += term;
        if (sum > rescale) {
            sum /= rescale;
            term /= rescale;
            offset += log_rescale;
        }
        const double r = y / (static_cast<double>(k + 1) * (n + k + 1));
        if (r < 1.0 && term * r / (1.0 - r) <= eps * sum) {
            return log_first + offset + std::log(sum);
        }
    }
    fail_cap("bessel_i", log_first + offset + std::log(sum));
}

double bessel_i_scaled_series(int n, double x, Accuracy acc) {
    return std::exp(log_bessel_i_series(n, x, acc) - x);
}

std::optional<BranchValue> bessel_i_scaled_asymptotic(int n, double x, Accuracy acc,
                                                      bool require_converged) {
    check_bessel_args(n, x);
    acc.validate();
    if (x <= 0.0) return std::nullopt;
    const double eps = series_eps(acc);
    const double mu = 4.0 * n * static_cast<double>(n);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < kMaxSeriesTerms; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = -term * (mu - odd * odd) / (8.0 * k * x);
        if (std::abs(next) >= std::abs(term)) {
            // Smallest term reached before convergence.
            if (require_converged) return std::nullopt;
            break;
        }
        term = next;
        sum += term;
        if (std::abs(term) <= eps * std::abs(sum)) break;
    }
    const double scale = 1.0 / std::sqrt(2.0 * std::numbers::pi * x);
    return BranchValue{sum * scale, std::abs(term / sum)};
}

}  // namespace detail

namespace {

// Below this argument the Hankel expansion cannot reach 1e-13 for any order.
constexpr double kAsymptoticMinArg = 30.0;

}  // namespace

double bessel_i_scaled(int n, double x, Accuracy acc) {
    check_bessel_args(n, x);
    acc.validate();
    if (x >= kAsymptoticMinArg) {
        if (auto v = detail::bessel_i_scaled_asymptotic(n, x, acc)) return v->value;
    }
    return detail::bessel_i_scaled_series(n, x, acc);
}

double log_bessel_i(int n, double x, Accuracy acc) {
    check_bessel_args(n, x);
    acc.validate();
    if (x >= kAsymptoticMinArg) {
        if (auto v = detail::bessel_i_scaled_asymptotic(n, x, acc)) return std::log(v->value) + x;
    }
    return detail::log_bessel_i_series(n, x, acc);
}

double bessel_i(int n, double x, Accuracy acc) {
    const double log_value = log_bessel_i(n, x, acc);
    if (log_value > std::log(std::numeric_limits<double>::max())) {
        throw OverflowError("bessel_i: I_" + std::to_string(n) + "(" + std::to_string(x) +
                            ") overflows; use bessel_i_scaled");
    }
    return std::exp(log_value);
}

double kummer_1f1(double a, double b, double x, Accuracy acc) {
    acc.validate();
    if (is_nonpositive_integer(b)) {
        throw InvalidArgument("kummer_1f1: b must not be a nonpositive integer");
    }
    if (x == 0.0) return 1.0;
    // Pick the representation whose series does not cancel or terminates:
    // 1F1(a; b; x) = e^x 1F1(b - a; b; -x).
    if (is_nonpositive_integer(a)) return kummer_series(a, b, x, acc);
    const bool transformed_terminates = is_nonpositive_integer(b - a);
    if (x < 0.0 || (transformed_terminates && x > 1.0)) {
        return std::exp(x) * kummer_series(b - a, b, -x, acc);
    }
    return kummer_series(a, b, x, acc);
}

double gamma_p(double s, double x, Accuracy acc) {
    check_gamma_args(s, x);
    acc.validate();
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) return gamma_p_series(s, x, acc);
    return 1.0 - gamma_q_fraction(s, x, acc);
}

double gamma_q(double s, double x, Accuracy acc) {
    check_gamma_args(s, x);
    acc.validate();
    if (x == 0.0) return 1.0;
    if (x < s + 1.0) return 1.0 - gamma_p_series(s, x, acc);
    return gamma_q_fraction(s, x, acc);
}

double upper_gamma(double s, double x, Accuracy acc) {
    const double q = gamma_q(s, x, acc);
    if (x == 0.0) return std::tgamma(s);
    if (q <= 0.0) return 0.0;
    return std::exp(std::lgamma(s) + std::log(q));
}

}  // namespace fastharq::specfun
