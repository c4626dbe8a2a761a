#include "fastharq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fastharq/error.hpp"
#include "fastharq/parallel.hpp"
#include "fastharq/specfun.hpp"

namespace fastharq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Differences of region integrals below this are quadrature noise, not a broken coupling.
constexpr double kNegativeSlack = 1e-9;

double clamp_difference(double diff, const char* what) {
    if (diff < -kNegativeSlack) {
        throw NumericalError(std::string(what) + ": negative first-success probability", diff);
    }
    return std::max(diff, 0.0);
}

double check_power(const PaConfig& pa, double p_cons) {
    pa.validate();
    return output_power(pa, p_cons);
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

// Pr(z1 < Z < z2) for a standard normal, from whichever tail avoids cancellation.
double gauss_mass(double z1, double z2) {
    if (!(z2 > z1)) return 0.0;
    if (z1 >= 0.0) return specfun::q_function(z1) - specfun::q_function(z2);
    if (z2 <= 0.0) return specfun::q_function(-z2) - specfun::q_function(-z1);
    return 1.0 - specfun::q_function(z2) - specfun::q_function(-z1);
}

}  // namespace

namespace detail {

std::vector<double> integrand_breaks(const SumGainDistribution& d, double a, double b, int n,
                                     const CodeSpec& code, double p) {
    std::vector<double> interior(d.panel_breaks().begin(), d.panel_breaks().end());
    if (p > 0.0) {
        const double rate = code.rate(n);
        const double alpha = std::expm1(rate) / p;
        const double mu =
            p * std::sqrt(n * static_cast<double>(code.sub_len) /
                          (2.0 * std::numbers::pi * std::expm1(2.0 * rate)));
        const double w = 0.5 / mu;
        interior.push_back(alpha);
        for (double j : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
            interior.push_back(alpha - j * w);
            interior.push_back(alpha + j * w);
        }
    }
    return quad::make_breaks(a, b, interior);
}

}  // namespace detail

double RegionTable::first_success(int i, int m) const {
    return clamp_difference(at(i - 1, m) - at(i, m), "first_success");
}

RegionTable build_region_table(const Boundaries& b,
                               const std::function<double(double, double, int)>& integral,
                               const std::function<double(double, double)>& mass,
                               double error_prob) {
    const int M = b.m_max();
    RegionTable t;
    t.m_max = M;
    t.error_prob = error_prob;
    t.theta.assign(static_cast<std::size_t>(M) + 1,
                   std::vector<double>(static_cast<std::size_t>(M) + 1, 0.0));
    for (int m = 1; m <= M; ++m) {
        const double lo = b[m];
        const double hi = b[m - 1];
        if (!(hi > lo)) continue;
        t.theta[0][static_cast<std::size_t>(m)] = mass(lo, hi);
        for (int i = 1; i <= M; ++i) {
            t.theta[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] = integral(lo, hi, i);
        }
    }
    return t;
}

double expected_delay_from_table(const RegionTable& t, const HarqConfig& cfg) {
    const int M = t.m_max;
    const double L = cfg.code.sub_len;
    double tau = 0.0;
    for (int m = 1; m <= M; ++m) {
        tau += t.region(m) * (m * L + cfg.lambda_round(m));
        if (m == M) continue;
        tau += cfg.d_fb * t.region(m);
        for (int i = m + 1; i <= M; ++i) {
            tau += (L + cfg.lambda_round(i)) * t.at(i - 1, m);
            if (i <= M - 1) tau += cfg.d_fb * t.at(i - 1, m);
        }
    }
    return tau;
}

double constrained_delay_from_table(const RegionTable& t, const HarqConfig& cfg) {
    const int M = t.m_max;
    double success = 0.0;
    double weighted = 0.0;
    for (int m = 1; m <= M; ++m) {
        const double first =
            clamp_difference(t.region(m) - t.at(m, m), "constrained_delay");
        success += first;
        weighted += first * cfg.packet_delay(m, m);
        for (int i = m + 1; i <= M; ++i) {
            const double p = t.first_success(i, m);
            success += p;
            weighted += p * cfg.packet_delay(m, i);
        }
    }
    if (success < 1e-12) {
        throw DegenerateSuccess("constrained_delay: success probability " +
                                std::to_string(success) + " is below 1e-12");
    }
    return weighted / success;
}

UnnecessaryStats unnecessary_from_table(const RegionTable& t, double p_cons) {
    UnnecessaryStats s;
    for (int m = 2; m <= t.m_max; ++m) {
        s.probability += clamp_difference(t.region(m) - t.at(m - 1, m), "unnecessary_tx");
        for (int i = 1; i <= m - 1; ++i) {
            s.energy += (m - i) * p_cons * t.first_success(i, m);
        }
    }
    return s;
}

LinkMetrics metrics_from_table(const RegionTable& t, const HarqConfig& cfg) {
    LinkMetrics out;
    out.error_prob = t.error_prob;
    out.expected_delay = expected_delay_from_table(t, cfg);
    out.throughput = throughput(cfg.code.big_k, out.error_prob, out.expected_delay);
    try {
        out.constrained_delay = constrained_delay_from_table(t, cfg);
    } catch (const DegenerateSuccess&) {
        out.constrained_delay.reset();
    }
    return out;
}

double y_integral(const SumGainDistribution& d, double a, double b, int n, const HarqConfig& cfg,
                  const PaConfig& pa, double p_cons) {
    if (!(a >= 0.0) || !(b >= a)) throw InvalidArgument("y_integral: need 0 <= a <= b");
    if (n < 1) throw InvalidArgument("y_integral: n must be >= 1");
    const double p = check_power(pa, p_cons);
    const double hi = std::min(b, d.upper_limit());
    if (!(hi > a)) return 0.0;
    if (!(p > 0.0)) return d.cdf(b) - d.cdf(a);
    const auto breaks = detail::integrand_breaks(d, a, hi, n, cfg.code, p);
    const CodeSpec& code = cfg.code;
    auto f = [&](double x) { return d.pdf(x) * round_error_prob(x, n, code, p); };
    return quad::integrate(f, std::span<const double>(breaks), kRegionTolerance).value;
}

double region_prob(const SumGainDistribution& d, const Boundaries& b, int m) {
    if (m < 1 || m > b.m_max()) throw InvalidArgument("region_prob: m out of range");
    const double hi = b[m - 1];
    const double lo = b[m];
    if (!(hi > lo)) return 0.0;
    return std::max(0.0, d.cdf(hi) - d.cdf(lo));
}

double theta_im(const SumGainDistribution& d, const Boundaries& b, const PaConfig& pa,
                double p_cons, const HarqConfig& cfg, int i, int m) {
    if (m < 1 || m > b.m_max()) throw InvalidArgument("theta_im: m out of range");
    if (i < 1) throw InvalidArgument("theta_im: i must be >= 1");
    return y_integral(d, b[m], b[m - 1], i, cfg, pa, p_cons);
}

double error_prob(const SumGainDistribution& d, const PaConfig& pa, double p_cons,
                  const HarqConfig& cfg) {
    cfg.validate();
    return y_integral(d, 0.0, kInf, cfg.m_max, cfg, pa, p_cons);
}

RegionTable region_table(const SumGainDistribution& d, const Boundaries& b, const PaConfig& pa,
                         double p_cons, const HarqConfig& cfg) {
    cfg.validate();
    if (b.m_max() != cfg.m_max) throw InvalidArgument("boundaries do not match M");
    return build_region_table(
        b,
        [&](double lo, double hi, int n) { return y_integral(d, lo, hi, n, cfg, pa, p_cons); },
        [&](double lo, double hi) { return std::max(0.0, d.cdf(hi) - d.cdf(lo)); },
        error_prob(d, pa, p_cons, cfg));
}

double expected_delay(const SumGainDistribution& d, const Boundaries& b, const PaConfig& pa,
                      double p_cons, const HarqConfig& cfg) {
    return expected_delay_from_table(region_table(d, b, pa, p_cons, cfg), cfg);
}

double throughput(double big_k, double error_prob, double expected_delay) {
    if (!(expected_delay > 0.0)) throw InvalidArgument("throughput: delay must be > 0");
    return big_k * (1.0 - error_prob) / expected_delay;
}

double constrained_delay(const SumGainDistribution& d, const Boundaries& b, const PaConfig& pa,
                         double p_cons, const HarqConfig& cfg) {
    return constrained_delay_from_table(region_table(d, b, pa, p_cons, cfg), cfg);
}

UnnecessaryStats unnecessary_tx_stats(const SumGainDistribution& d, const Boundaries& b,
                                      const PaConfig& pa, double p_cons, const HarqConfig& cfg) {
    return unnecessary_from_table(region_table(d, b, pa, p_cons, cfg), p_cons);
}

LinkMetrics link_metrics(const SumGainDistribution& d, const Boundaries& b, const PaConfig& pa,
                         double p_cons, const HarqConfig& cfg) {
    return metrics_from_table(region_table(d, b, pa, p_cons, cfg), cfg);
}

double LinearizationConstants::ramp(double x) const {
    if (x <= c) return 1.0;
    if (x >= d) return 0.0;
    return 0.5 + alpha * mu - mu * x;
}

LinearizationConstants linearization_constants(int n, const HarqConfig& cfg, const PaConfig& pa,
                                               double p_cons) {
    if (n < 1) throw InvalidArgument("linearization_constants: n must be >= 1");
    const double p = check_power(pa, p_cons);
    if (!(p > 0.0)) throw InvalidArgument("linearization_constants: output power must be > 0");
    const double rate = cfg.code.rate(n);
    const double nl = static_cast<double>(n) * cfg.code.sub_len;
    LinearizationConstants lc;
    lc.alpha = std::expm1(rate) / p;
    lc.mu = p * std::sqrt(nl / (2.0 * std::numbers::pi * std::expm1(2.0 * rate)));
    lc.c = lc.alpha - 0.5 / lc.mu;
    lc.d = lc.alpha + 0.5 / lc.mu;
    return lc;
}

double y_lemma3(const GaussianApprox& gauss, double a, double b, int n, const HarqConfig& cfg,
                const PaConfig& pa, double p_cons) {
    if (!(b >= a)) throw InvalidArgument("y_lemma3: need a <= b");
    if (a == b) return 0.0;
    const auto lc = linearization_constants(n, cfg, pa, p_cons);
    const double m = gauss.mean;
    const double s = std::sqrt(gauss.variance);
    using specfun::q_function;
    const double flat = gauss_mass((std::min(a, lc.c) - m) / s, (std::min(b, lc.c) - m) / s);
    const double lo = std::min(std::max(a, lc.c), lc.d);
    const double hi = std::max(std::min(b, lc.d), lc.c);
    if (!(hi > lo)) return flat;
    const double zl = (lo - m) / s;
    const double zh = (hi - m) / s;
    const double slope = (0.5 + lc.alpha * lc.mu - lc.mu * m) * gauss_mass(zl, zh) +
                         lc.mu * s * (normal_pdf(zh) - normal_pdf(zl));
    return flat + slope;
}

double y_lemma4(const FadingModel& model, int n_r, double a, double b, int n,
                const HarqConfig& cfg, const PaConfig& pa, double p_cons) {
    if (!model.is_rayleigh()) throw InvalidArgument("y_lemma4: requires Rayleigh fading");
    if (n_r < 1) throw InvalidArgument("y_lemma4: n_r must be >= 1");
    if (!(a >= 0.0) || !(b >= a)) throw InvalidArgument("y_lemma4: need 0 <= a <= b");
    if (a == b) return 0.0;
    const auto lc = linearization_constants(n, cfg, pa, p_cons);
    const double omega = model.omega();
    const double nr = n_r;
    // Pr(x1 < X < x2) for X ~ Gamma(shape, omega), from whichever tail avoids cancellation.
    auto mass = [&](double shape, double x1, double x2) {
        if (!(x2 > x1)) return 0.0;
        const double u1 = std::max(x1, 0.0) / omega;
        if (x2 == kInf) return u1 == 0.0 ? 1.0 : specfun::gamma_q(shape, u1);
        const double u2 = x2 / omega;
        if (u2 <= shape) return specfun::gamma_p(shape, u2) - specfun::gamma_p(shape, u1);
        return specfun::gamma_q(shape, u1) - specfun::gamma_q(shape, u2);
    };
    const double flat = mass(nr, std::min(a, lc.c), std::min(b, lc.c));
    const double lo = std::min(std::max(a, lc.c), lc.d);
    const double hi = std::max(std::min(b, lc.d), lc.c);
    if (!(hi > lo)) return flat;
    const double slope = (0.5 + lc.alpha * lc.mu) * mass(nr, lo, hi) -
                         lc.mu * omega * nr * mass(nr + 1.0, lo, hi);
    return flat + std::max(slope, 0.0);
}

AsymptoticMetrics asymptotic_metrics(const SumGainDistribution& d, const Boundaries& b,
                                     const HarqConfig& cfg, const PaConfig& pa, double p_cons) {
    cfg.validate();
    if (b.m_max() != cfg.m_max) throw InvalidArgument("boundaries do not match M");
    const double p = check_power(pa, p_cons);
    auto threshold = [&](int n) { return p > 0.0 ? decoding_threshold(n, cfg.code, p) : kInf; };
    auto mass = [&](double lo, double hi) { return std::max(0.0, d.cdf(hi) - d.cdf(lo)); };
    auto integral = [&](double lo, double hi, int n) {
        const double t = threshold(n);
        if (!(t > lo)) return 0.0;
        return mass(lo, std::min(hi, t));
    };
    const double t_m = threshold(cfg.m_max);
    const auto table = build_region_table(b, integral, mass, d.cdf(t_m));
    AsymptoticMetrics out;
    out.metrics = metrics_from_table(table, cfg);
    const auto g = clt_params(d.model(), d.n_r());
    out.clt_error = specfun::q_function((g.mean - t_m) / std::sqrt(g.variance));
    return out;
}

SimEstimate expected_delay_imperfect_csir(const SumGainDistribution& d, const PilotModel& pilot,
                                          const Boundaries& b, const PaConfig& pa, double p_cons,
                                          const HarqConfig& cfg, std::uint64_t n_samples,
                                          std::uint64_t seed) {
    cfg.validate();
    pilot.validate();
    if (b.m_max() != cfg.m_max) throw InvalidArgument("boundaries do not match M");
    if (n_samples < 1) throw InvalidArgument("expected_delay_imperfect_csir: need n_samples >= 1");
    if (d.n_r() != 1 || !d.model().is_rayleigh()) {
        throw InvalidArgument("expected_delay_imperfect_csir: only SISO Rayleigh is supported");
    }
    const double p = check_power(pa, p_cons);
    const int M = cfg.m_max;
    const double L = cfg.code.sub_len;
    auto work = [&](std::uint64_t begin, std::uint64_t end) {
        Accumulator acc;
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            RandomStream rng(seed, idx);
            const auto s = sample_joint_gain_estimate(d, pilot, rng);
            const int n = b.region_of(s.estimate);
            double tau = n * L + cfg.lambda_round(n);
            if (n < M) tau += cfg.d_fb;
            for (int i = n + 1; i <= M; ++i) {
                const double q = round_error_prob(s.gain, i - 1, cfg.code, p);
                tau += (L + cfg.lambda_round(i)) * q;
                if (i <= M - 1) tau += cfg.d_fb * q;
            }
            acc.add(tau);
        }
        return acc;
    };
    return reduce_chunks<Accumulator>(n_samples, 8192, work).estimate();
}

double relative_gain(double tau_std, double tau_fast) {
    if (!(tau_std > 0.0)) throw InvalidArgument("relative_gain: tau_std must be > 0");
    return (tau_std - tau_fast) / tau_std;
}

double lemma6_limit(int m_max, double c) {
    if (m_max < 1) throw InvalidArgument("lemma6_limit: M must be >= 1");
    if (!(c >= 0.0)) throw InvalidArgument("lemma6_limit: c must be >= 0");
    return c * (m_max - 1) / (2.0 + c * (m_max + 1));
}

}  // namespace fastharq
