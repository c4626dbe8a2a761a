#pragma once

#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "fastharq/quadrature.hpp"
#include "fastharq/rng.hpp"

namespace fastharq {

struct Rayleigh {
    double omega = 1.0;  ///< mean power per antenna
};

struct Rician {
    double k = 0.0;      ///< Rician factor (linear)
    double omega = 1.0;  ///< mean power per antenna
};

/// Per-antenna fading law of the channel gain g = |h|^2.
class FadingModel {
public:
    static FadingModel rayleigh(double omega = 1.0);
    static FadingModel rician(double k, double omega = 1.0);

    bool is_rayleigh() const { return std::holds_alternative<Rayleigh>(law_); }
    double omega() const;
    /// Rician factor; 0 for Rayleigh.
    double k() const;
    const std::variant<Rayleigh, Rician>& law() const { return law_; }

private:
    explicit FadingModel(std::variant<Rayleigh, Rician> law) : law_(law) {}
    std::variant<Rayleigh, Rician> law_;
};

/// Distribution of the sum gain G = g^1 + ... + g^{N_r} over independent antennas.
/// Immutable; copies share the cached CDF panels.
class SumGainDistribution {
public:
    SumGainDistribution(FadingModel model, int n_r);

    const FadingModel& model() const { return model_; }
    int n_r() const { return n_r_; }

    double pdf(double x) const;
    double cdf(double x) const;
    /// Inverse CDF; 0 for u <= 0 and +inf for u >= 1.
    double quantile(double u) const;

    double mean() const;
    double variance() const;

    /// Truncation point of every integral over [0, inf); the mass beyond it is below 1e-17.
    double upper_limit() const { return upper_; }
    /// Panel breakpoints over [0, upper_limit()] that resolve the bulk of the density.
    std::span<const double> panel_breaks() const { return breaks_; }

private:
    FadingModel model_;
    int n_r_;
    double upper_;
    std::vector<double> breaks_;
    std::shared_ptr<const quad::CumulativeIntegral> cdf_table_;  // Rician only
};

double pdf_sum_gain(const SumGainDistribution& d, double x);
double cdf_sum_gain(const SumGainDistribution& d, double x);

/// Gaussian fit N(N_r zeta, N_r nu^2) of the sum gain.
struct GaussianApprox {
    double mean;
    double variance;
    double pdf(double x) const;
    double cdf(double x) const;
};

/// Gamma fit with density rate^shape x^{shape-1} e^{-rate x} / Gamma(shape).
struct GammaApprox {
    double rate;
    double shape;
    double pdf(double x) const;
    double cdf(double x) const;
};

/// E[g^n] for one antenna: (omega/(k+1))^n n! e^{-k} 1F1(n+1; 1; k).
double rician_moment(double k, double omega, int n);

GaussianApprox clt_params(const FadingModel& model, int n_r);
/// Moment-matched Gamma fit: rate zeta/nu^2, shape N_r zeta^2/nu^2.
GammaApprox gamma_params(const FadingModel& model, int n_r);

double sample_sum_gain(const SumGainDistribution& d, RandomStream& rng);

/// Pilot-aided estimation: n_p pilot symbols of power p_pilot in unit-variance noise.
struct PilotModel {
    int n_p = 1;
    double p_pilot = 1.0;
    void validate() const;
};

struct GainPair {
    double gain;      ///< true |h|^2
    double estimate;  ///< |h_hat|^2 from the linear MMSE estimate
};

/// Draws (G, G_est) for a SISO Rayleigh link; other configurations are rejected.
GainPair sample_joint_gain_estimate(const SumGainDistribution& d, const PilotModel& pilot,
                                    RandomStream& rng);

}  // namespace fastharq
