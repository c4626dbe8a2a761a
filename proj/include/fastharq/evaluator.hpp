#pragma once

#include <memory>
#include <span>
#include <vector>

#include "fastharq/analysis.hpp"
#include "fastharq/harq.hpp"
#include "fastharq/quadrature.hpp"

namespace fastharq {

/// Link metrics at a fixed consumed power for many boundary sets. Caches the running
/// integrals H_n(x) = int_0^x f_G Q_n for n = 1..M, so a boundary set costs O(M^2)
/// partial integrals. Immutable after construction.
class LinkEvaluator {
public:
    LinkEvaluator(LinkSpec link, double p_cons);

    const LinkSpec& link() const { return link_; }
    double p_cons() const { return p_cons_; }
    double output_power() const { return p_; }
    double error_prob() const { return error_; }

    /// int_0^x f_G Q_n.
    double running_integral(int n, double x) const;
    RegionTable table(const Boundaries& b) const;
    LinkMetrics metrics(const Boundaries& b) const;
    UnnecessaryStats unnecessary(const Boundaries& b) const;

    /// Point values at a fixed set of CDF levels, for grid searches.
    class Levels {
    public:
        std::span<const double> levels() const { return levels_; }
        std::span<const double> gains() const { return gains_; }
        /// Table for boundaries q[i] = gain at level index idx[i-1] (nonincreasing levels).
        RegionTable table(std::span<const int> idx) const;

    private:
        friend class LinkEvaluator;
        int m_max_ = 0;
        double error_ = 0.0;
        std::vector<double> levels_;
        std::vector<double> gains_;
        std::vector<double> cdf_;             // F_G at each level; +inf maps to 1
        std::vector<std::vector<double>> h_;  // h_[n][j] = H_n(gain j)
        std::vector<double> totals_;          // totals_[n] = H_n(+inf)
    };

    Levels at_levels(std::vector<double> levels) const;

private:
    LinkSpec link_;
    double p_cons_;
    double p_;
    double error_;
    std::vector<std::shared_ptr<const quad::CumulativeIntegral>> running_;  // index n-1
};

}  // namespace fastharq
