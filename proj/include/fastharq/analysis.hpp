#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fastharq/channel.hpp"
#include "fastharq/harq.hpp"
#include "fastharq/power.hpp"
#include "fastharq/quadrature.hpp"
#include "fastharq/stats.hpp"

namespace fastharq {

/// Quadrature tolerance shared by the region integrals.
inline constexpr quad::Tolerance kRegionTolerance{1e-250, 1e-10, 20000};

/// Region probabilities and undetected-decoding probabilities of one boundary set.
/// theta[i][m] = Pr(G in S^m, not decodable with i rounds); theta[0][m] = Pr(S^m).
/// Index 0 of the region axis is unused.
struct RegionTable {
    int m_max = 0;
    std::vector<std::vector<double>> theta;
    double error_prob = 0.0;

    double region(int m) const { return theta[0][static_cast<std::size_t>(m)]; }
    double at(int i, int m) const {
        return theta[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
    }
    /// Pr(S^m, first decodable at round i) = theta[i-1][m] - theta[i][m].
    double first_success(int i, int m) const;
};

/// Builds a RegionTable from a per-region integral provider:
/// integral(lo, hi, n) = int_lo^hi f_G Q_n and mass(lo, hi) = Pr(lo <= G < hi).
RegionTable build_region_table(const Boundaries& b,
                               const std::function<double(double, double, int)>& integral,
                               const std::function<double(double, double)>& mass,
                               double error_prob);

double expected_delay_from_table(const RegionTable& t, const HarqConfig& cfg);
/// Throws DegenerateSuccess when the success probability is below 1e-12.
double constrained_delay_from_table(const RegionTable& t, const HarqConfig& cfg);
UnnecessaryStats unnecessary_from_table(const RegionTable& t, double p_cons);
LinkMetrics metrics_from_table(const RegionTable& t, const HarqConfig& cfg);

/// int_a^b f_G(x) round_error_prob(x, n, code, P) dx with P = output_power(pa, p_cons).
double y_integral(const SumGainDistribution& d, double a, double b, int n, const HarqConfig& cfg,
                  const PaConfig& pa, double p_cons);

double region_prob(const SumGainDistribution& d, const Boundaries& b, int m);

double theta_im(const SumGainDistribution& d, const Boundaries& b, const PaConfig& pa,
                double p_cons, const HarqConfig& cfg, int i, int m);

/// Exact error probability; independent of the boundaries.
double error_prob(const SumGainDistribution& d, const PaConfig& pa, double p_cons,
                  const HarqConfig& cfg);

RegionTable region_table(const SumGainDistribution& d, const Boundaries& b, const PaConfig& pa,
                         double p_cons, const HarqConfig& cfg);

double expected_delay(const SumGainDistribution& d, const Boundaries& b, const PaConfig& pa,
                      double p_cons, const HarqConfig& cfg);

double throughput(double big_k, double error_prob, double expected_delay);

double constrained_delay(const SumGainDistribution& d, const Boundaries& b, const PaConfig& pa,
                         double p_cons, const HarqConfig& cfg);

UnnecessaryStats unnecessary_tx_stats(const SumGainDistribution& d, const Boundaries& b,
                                      const PaConfig& pa, double p_cons, const HarqConfig& cfg);

/// Error probability, expected delay, throughput and constrained delay in one pass.
LinkMetrics link_metrics(const SumGainDistribution& d, const Boundaries& b, const PaConfig& pa,
                         double p_cons, const HarqConfig& cfg);

/// First-order expansion of round_error_prob(., n) around its median alpha_n.
struct LinearizationConstants {
    double alpha;
    double mu;
    double c;  ///< alpha - 1/(2 mu)
    double d;  ///< alpha + 1/(2 mu)

    /// Ramp U_n(x): 1 below c, 1/2 + alpha mu - mu x on [c, d], 0 above d.
    double ramp(double x) const;
};

LinearizationConstants linearization_constants(int n, const HarqConfig& cfg, const PaConfig& pa,
                                               double p_cons);

/// int_a^b U_n(x) times the Gaussian-fit density, in closed form.
double y_lemma3(const GaussianApprox& gauss, double a, double b, int n, const HarqConfig& cfg,
                const PaConfig& pa, double p_cons);

/// int_a^b U_n(x) times the exact Rayleigh sum-gain density, in closed form.
double y_lemma4(const FadingModel& model, int n_r, double a, double b, int n,
                const HarqConfig& cfg, const PaConfig& pa, double p_cons);

struct AsymptoticMetrics {
    LinkMetrics metrics;   ///< step-function decoding, exact F_G
    double clt_error;      ///< Gaussian-fit approximation of the error probability
};

/// Infinite-blocklength metrics: round n decodes iff G > (e^{K/(nL)} - 1)/P.
AsymptoticMetrics asymptotic_metrics(const SumGainDistribution& d, const Boundaries& b,
                                     const HarqConfig& cfg, const PaConfig& pa, double p_cons);

/// Expected delay when the region is chosen from the pilot-based estimate and decoding
/// depends on the true gain. Monte Carlo over the joint (G, G_est) law, with the
/// decoding randomness integrated out per sample.
SimEstimate expected_delay_imperfect_csir(const SumGainDistribution& d, const PilotModel& pilot,
                                          const Boundaries& b, const PaConfig& pa, double p_cons,
                                          const HarqConfig& cfg, std::uint64_t n_samples,
                                          std::uint64_t seed);

/// (tau_std - tau_fast) / tau_std.
double relative_gain(double tau_std, double tau_fast);

/// Low-SNR limit of relative_gain: c(M-1) / (2 + c(M+1)).
double lemma6_limit(int m_max, double c);

namespace detail {

/// Panel breakpoints for f_G Q_n on [a, b]: the density panels plus the transition of Q_n.
std::vector<double> integrand_breaks(const SumGainDistribution& d, double a, double b, int n,
                                     const CodeSpec& code, double p);

}  // namespace detail

}  // namespace fastharq
