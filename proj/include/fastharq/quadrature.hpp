#pragma once

// Adaptive Gauss-Kronrod (7/15) integration with a global error budget, plus a
// cumulative-integral cache used for distribution functions and region integrals.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "fastharq/error.hpp"

namespace fastharq::quad {

struct Tolerance {
    double abs = 1e-300;  ///< absolute error budget for the whole integral
    double rel = 1e-11;   ///< relative error budget for the whole integral
    int max_panels = 4000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
};

namespace detail {

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

inline constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
Panel kronrod15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrod[7];
    double gauss = fc * kGauss[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kNodes[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kKronrod[j] * pair;
        if (j % 2 == 1) gauss += kGauss[j / 2] * pair;
    }
    return Panel{a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Integrates f over [breaks.front(), breaks.back()], seeding one panel per break interval.
/// Panels with the largest error are bisected until the total error estimate is within
/// max(tol.abs, tol.rel * |I|). Throws NumericalError carrying the estimate otherwise.
template <class F>
Result integrate(F&& f, std::span<const double> breaks, const Tolerance& tol = {}) {
    Result out;
    if (breaks.size() < 2) return out;
    std::priority_queue<detail::Panel> heap;
    double total = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        auto p = detail::kronrod15(f, breaks[i], breaks[i + 1]);
        total += p.value;
        error += p.error;
        heap.push(p);
    }
    int panels = static_cast<int>(heap.size());
    while (error > std::max(tol.abs, tol.rel * std::abs(total))) {
        if (panels >= tol.max_panels || heap.empty()) {
            throw NumericalError("quadrature: no convergence after " + std::to_string(panels) +
                                     " panels",
                                 total, error);
        }
        const auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Panel cannot be split further in double precision; accept its estimate.
            heap.pop();
            error -= worst.error;
            continue;
        }
        heap.pop();
        auto left = detail::kronrod15(f, worst.a, mid);
        auto right = detail::kronrod15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }
    // Re-sum to shed the drift accumulated by incremental updates.
    double resum = 0.0;
    double err = 0.0;
    auto remaining = std::move(heap);
    while (!remaining.empty()) {
        resum += remaining.top().value;
        err += remaining.top().error;
        remaining.pop();
    }
    out.value = resum;
    out.error = std::max(err, 0.0);
    out.panels = panels;
    return out;
}

template <class F>
Result integrate(F&& f, double a, double b, const Tolerance& tol = {}) {
    const std::array<double, 2> breaks{a, b};
    return integrate(std::forward<F>(f), std::span<const double>(breaks), tol);
}

/// Merges interior points falling strictly inside (a, b) with the endpoints, sorted.
inline std::vector<double> make_breaks(double a, double b, std::span<const double> interior) {
    std::vector<double> out;
    out.reserve(interior.size() + 2);
    out.push_back(a);
    for (double x : interior) {
        if (x > a && x < b && std::isfinite(x)) out.push_back(x);
    }
    out.push_back(b);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Cached running integral H(x) = int_{x0}^{x} f(t) dt of a nonnegative integrand
/// over a fixed grid; values past the last grid point return the full integral.
/// Immutable after construction.
class CumulativeIntegral {
public:
    CumulativeIntegral(std::function<double(double)> f, std::vector<double> grid,
                       Tolerance tol = {})
        : f_(std::move(f)), grid_(std::move(grid)), tol_(tol) {
        if (grid_.size() < 2) throw InvalidArgument("CumulativeIntegral: grid too small");
        prefix_.assign(grid_.size(), 0.0);
        for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
            prefix_[i + 1] = prefix_[i] + integrate(f_, grid_[i], grid_[i + 1], tol_).value;
        }
    }

    double operator()(double x) const {
        if (!(x > grid_.front())) return 0.0;
        if (x >= grid_.back()) return prefix_.back();
        const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
        const std::size_t j = static_cast<std::size_t>(it - grid_.begin()) - 1;
        if (x == grid_[j]) return prefix_[j];
        return prefix_[j] + integrate(f_, grid_[j], x, tol_).value;
    }

    double total() const { return prefix_.back(); }
    double lower() const { return grid_.front(); }
    double upper() const { return grid_.back(); }
    std::span<const double> grid() const { return grid_; }
    const std::function<double(double)>& integrand() const { return f_; }

private:
    std::function<double(double)> f_;
    std::vector<double> grid_;
    std::vector<double> prefix_;
    Tolerance tol_;
};

}  // namespace fastharq::quad
