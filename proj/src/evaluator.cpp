#include "fastharq/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fastharq/error.hpp"

namespace fastharq {

LinkEvaluator::LinkEvaluator(LinkSpec link, double p_cons)
    : link_(std::move(link)), p_cons_(p_cons) {
    link_.validate();
    p_ = fastharq::output_power(link_.pa, p_cons_);
    const auto& d = link_.dist;
    const auto code = link_.cfg.code;
    const double p = p_;
    for (int n = 1; n <= link_.cfg.m_max; ++n) {
        auto grid = detail::integrand_breaks(d, 0.0, d.upper_limit(), n, code, p);
        running_.push_back(std::make_shared<const quad::CumulativeIntegral>(
            [d, n, code, p](double x) { return d.pdf(x) * round_error_prob(x, n, code, p); },
            std::move(grid), kRegionTolerance));
    }
    error_ = running_.back()->total();
}

double LinkEvaluator::running_integral(int n, double x) const {
    if (n < 1 || n > link_.cfg.m_max) throw InvalidArgument("running_integral: n out of range");
    return (*running_[static_cast<std::size_t>(n - 1)])(x);
}

RegionTable LinkEvaluator::table(const Boundaries& b) const {
    if (b.m_max() != link_.cfg.m_max) throw InvalidArgument("boundaries do not match M");
    const auto& d = link_.dist;
    return build_region_table(
        b,
        [&](double lo, double hi, int n) {
            return std::max(0.0, running_integral(n, hi) - running_integral(n, lo));
        },
        [&](double lo, double hi) { return std::max(0.0, d.cdf(hi) - d.cdf(lo)); }, error_);
}

LinkMetrics LinkEvaluator::metrics(const Boundaries& b) const {
    return metrics_from_table(table(b), link_.cfg);
}

UnnecessaryStats LinkEvaluator::unnecessary(const Boundaries& b) const {
    return unnecessary_from_table(table(b), p_cons_);
}

LinkEvaluator::Levels LinkEvaluator::at_levels(std::vector<double> levels) const {
    Levels out;
    const int M = link_.cfg.m_max;
    out.m_max_ = M;
    out.error_ = error_;
    out.levels_ = std::move(levels);
    out.h_.assign(static_cast<std::size_t>(M) + 1, {});
    out.totals_.assign(static_cast<std::size_t>(M) + 1, 0.0);
    for (int n = 1; n <= M; ++n) out.totals_[static_cast<std::size_t>(n)] = running_[static_cast<std::size_t>(n - 1)]->total();
    for (double u : out.levels_) {
        const double x = link_.dist.quantile(u);
        out.gains_.push_back(x);
        out.cdf_.push_back(std::isinf(x) ? 1.0 : link_.dist.cdf(x));
        for (int n = 1; n <= M; ++n) {
            out.h_[static_cast<std::size_t>(n)].push_back(running_integral(n, x));
        }
    }
    return out;
}

RegionTable LinkEvaluator::Levels::table(std::span<const int> idx) const {
    const int M = m_max_;
    if (static_cast<int>(idx.size()) != M - 1) throw InvalidArgument("Levels: wrong tuple size");
    RegionTable t;
    t.m_max = M;
    t.error_prob = error_;
    t.theta.assign(static_cast<std::size_t>(M) + 1,
                   std::vector<double>(static_cast<std::size_t>(M) + 1, 0.0));
    // Values at q[m-1] and q[m]; -1 encodes +inf above the top region and -2 encodes 0.
    auto cdf_at = [&](int j) {
        return j == -1 ? 1.0 : (j == -2 ? 0.0 : cdf_[static_cast<std::size_t>(j)]);
    };
    auto h_at = [&](int n, int j) {
        const auto& h = h_[static_cast<std::size_t>(n)];
        return j == -1 ? totals_[static_cast<std::size_t>(n)] : (j == -2 ? 0.0 : h[static_cast<std::size_t>(j)]);
    };
    for (int m = 1; m <= M; ++m) {
        const int hi = m == 1 ? -1 : idx[static_cast<std::size_t>(m - 2)];
        const int lo = m == M ? -2 : idx[static_cast<std::size_t>(m - 1)];
        t.theta[0][static_cast<std::size_t>(m)] = std::max(0.0, cdf_at(hi) - cdf_at(lo));
        for (int n = 1; n <= M; ++n) {
            t.theta[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)] =
                std::max(0.0, h_at(n, hi) - h_at(n, lo));
        }
    }
    return t;
}

}  // namespace fastharq
