#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fastharq/channel.hpp"
#include "fastharq/fbl.hpp"
#include "fastharq/power.hpp"

namespace fastharq {

/// Decoding delay Lambda(len) = c * len for a codeword of len channel uses.
struct DecodeDelay {
    double c = 0.0;
    double operator()(double len) const { return c * len; }
};

struct HarqConfig {
    int m_max = 2;     ///< maximum number of rounds M
    CodeSpec code;     ///< K, L, third-order flag
    double d_fb = 0.0; ///< feedback delay D in channel uses
    DecodeDelay decode_delay;

    void validate() const;

    double lambda_round(int n) const {
        return decode_delay(static_cast<double>(n) * code.sub_len);
    }
    /// Delay of a packet whose first decode attempt is at round m and which stops at round i.
    /// Every attempt j in [m, i] adds Lambda(jL); feedback follows every attempt except at M.
    double packet_delay(int m, int i) const;
};

/// Quantization thresholds q[0] = +inf >= q[1] >= ... >= q[M] = 0.
/// Region S^m = [q[m], q[m-1]) selects round m as the first decoding attempt.
class Boundaries {
public:
    /// All interior thresholds at 0: decoding starts at round 1 (standard HARQ).
    static Boundaries standard(int m_max);
    /// Interior thresholds q[1..M-1], nonincreasing and nonnegative (+inf allowed).
    static Boundaries from_interior(std::span<const double> interior);
    /// q[i] = F^{-1}(u[i]) for CDF levels u[1] >= ... >= u[M-1].
    static Boundaries from_quantiles(const SumGainDistribution& d, std::span<const double> levels);
    /// Equiprobable regions: q[i] = F^{-1}(1 - i/M).
    static Boundaries uniform(const SumGainDistribution& d, int m_max);

    int m_max() const { return static_cast<int>(q_.size()) - 1; }
    double operator[](int i) const { return q_[static_cast<std::size_t>(i)]; }
    std::span<const double> q() const { return q_; }
    std::vector<double> interior() const;
    bool is_standard() const;
    /// Region m with q[m] <= g < q[m-1].
    int region_of(double g) const;

private:
    explicit Boundaries(std::vector<double> q);
    std::vector<double> q_;
};

struct UnnecessaryStats {
    double probability = 0.0;  ///< decodable strictly before the first decode attempt
    double energy = 0.0;       ///< E[wasted rounds] * p_cons (energy per L channel uses)
};

struct LinkMetrics {
    double error_prob = 0.0;
    double expected_delay = 0.0;  ///< channel uses
    double throughput = 0.0;      ///< npcu
    std::optional<double> constrained_delay;
};

/// Everything needed to evaluate a link apart from the consumed power and boundaries.
struct LinkSpec {
    SumGainDistribution dist;
    PaConfig pa;
    HarqConfig cfg;

    void validate() const;
};

}  // namespace fastharq
