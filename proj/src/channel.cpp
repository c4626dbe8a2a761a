#include "fastharq/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fastharq/error.hpp"
#include "fastharq/specfun.hpp"

namespace fastharq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Tail mass left beyond upper_limit().
constexpr double kTailMass = 1e-18;

bool rician_with_los(const FadingModel& m) { return !m.is_rayleigh() && m.k() > 0.0; }

double gamma_sum_pdf(double x, int n, double scale) {
    if (x == 0.0) return n == 1 ? 1.0 / scale : 0.0;
    const double y = x / scale;
    return std::exp((n - 1) * std::log(y) - y - std::lgamma(n)) / scale;
}

double rician_sum_pdf(double x, int n, double k, double omega) {
    const double kp1 = k + 1.0;
    if (x == 0.0) return n == 1 ? kp1 * std::exp(-k) / omega : 0.0;
    const double z = 2.0 * std::sqrt(k * kp1 * n * x / omega);
    const double log_f = std::log(kp1 / omega) - k * n +
                         0.5 * (n - 1) * std::log(kp1 * x / (k * n * omega)) - kp1 * x / omega +
                         specfun::log_bessel_i(n - 1, z);
    return std::exp(log_f);
}

}  // namespace

FadingModel FadingModel::rayleigh(double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw InvalidArgument("FadingModel: omega must be > 0");
    }
    return FadingModel(Rayleigh{omega});
}

FadingModel FadingModel::rician(double k, double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw InvalidArgument("FadingModel: omega must be > 0");
    }
    if (!(k >= 0.0) || !std::isfinite(k)) throw InvalidArgument("FadingModel: k must be >= 0");
    return FadingModel(Rician{k, omega});
}

double FadingModel::omega() const {
    return std::visit([](const auto& l) { return l.omega; }, law_);
}

double FadingModel::k() const {
    if (const auto* r = std::get_if<Rician>(&law_)) return r->k;
    return 0.0;
}

SumGainDistribution::SumGainDistribution(FadingModel model, int n_r) : model_(model), n_r_(n_r) {
    if (n_r < 1) throw InvalidArgument("SumGainDistribution: n_r must be >= 1");
    const double m = mean();
    const double s = std::sqrt(variance());
    const double tail_scale = model_.omega() / (model_.k() + 1.0);

    double upper = m + 12.0 * s;
    while (pdf(upper) * tail_scale * 4.0 > kTailMass) upper += s;
    upper_ = upper;

    breaks_.push_back(0.0);
    for (int j = -10; j <= 12; ++j) {
        const double x = m + j * s;
        if (x > breaks_.back() && x < upper_) breaks_.push_back(x);
    }
    for (double x = m + 13.0 * s; x < upper_; x += s) breaks_.push_back(x);
    breaks_.push_back(upper_);

    if (rician_with_los(model_)) {
        const FadingModel mm = model_;
        const int n = n_r_;
        cdf_table_ = std::make_shared<const quad::CumulativeIntegral>(
            [mm, n](double x) { return rician_sum_pdf(x, n, mm.k(), mm.omega()); }, breaks_,
            quad::Tolerance{1e-300, 1e-12, 4000});
    }
}

double SumGainDistribution::pdf(double x) const {
    if (!(x >= 0.0)) {
        if (x < 0.0) return 0.0;
        throw InvalidArgument("pdf_sum_gain: x must be a number");
    }
    if (!std::isfinite(x)) return 0.0;
    if (rician_with_los(model_)) return rician_sum_pdf(x, n_r_, model_.k(), model_.omega());
    return gamma_sum_pdf(x, n_r_, model_.omega() / (model_.k() + 1.0));
}

double SumGainDistribution::cdf(double x) const {
    if (std::isnan(x)) throw InvalidArgument("cdf_sum_gain: x must be a number");
    if (!(x > 0.0)) return 0.0;
    if (x == kInf) return 1.0;
    if (cdf_table_) return std::min(1.0, (*cdf_table_)(x));
    return specfun::gamma_p(n_r_, x / model_.omega());
}

double SumGainDistribution::quantile(double u) const {
    if (std::isnan(u)) throw InvalidArgument("quantile: u must be a number");
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return kInf;
    double lo = 0.0;
    double hi = upper_;
    if (cdf(hi) < u) return hi;
    double x = std::clamp(mean(), lo, hi);
    for (int it = 0; it < 300; ++it) {
        const double f = cdf(x) - u;
        if (f == 0.0) return x;
        if (f < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        const double d = pdf(x);
        double next = d > 0.0 ? x - f / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-10 * std::max(std::abs(next), 1e-300) ||
            hi - lo <= 1e-10 * std::max(hi, 1e-300)) {
            return next;
        }
        x = next;
    }
    return x;
}

double SumGainDistribution::mean() const { return n_r_ * model_.omega(); }

double SumGainDistribution::variance() const {
    const double k = model_.k();
    const double w = model_.omega();
    return n_r_ * w * w * (1.0 + 2.0 * k) / ((1.0 + k) * (1.0 + k));
}

double pdf_sum_gain(const SumGainDistribution& d, double x) {
    if (!(x >= 0.0)) throw InvalidArgument("pdf_sum_gain: x must be >= 0");
    return d.pdf(x);
}

double cdf_sum_gain(const SumGainDistribution& d, double x) {
    if (!(x >= 0.0)) throw InvalidArgument("cdf_sum_gain: x must be >= 0");
    return d.cdf(x);
}

double GaussianApprox::pdf(double x) const {
    const double z = (x - mean) / std::sqrt(variance);
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi * variance);
}

double GaussianApprox::cdf(double x) const {
    return specfun::q_function((mean - x) / std::sqrt(variance));
}

double GammaApprox::pdf(double x) const {
    if (x < 0.0) return 0.0;
    if (x == 0.0) return shape == 1.0 ? rate : (shape < 1.0 ? kInf : 0.0);
    return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x -
                    std::lgamma(shape));
}

double GammaApprox::cdf(double x) const {
    if (!(x > 0.0)) return 0.0;
    if (x == kInf) return 1.0;
    return specfun::gamma_p(shape, rate * x);
}

double rician_moment(double k, double omega, int n) {
    if (n < 0) throw InvalidArgument("rician_moment: n must be >= 0");
    return std::pow(omega / (k + 1.0), n) * std::tgamma(n + 1.0) * std::exp(-k) *
           specfun::kummer_1f1(n + 1.0, 1.0, k);
}

GaussianApprox clt_params(const FadingModel& model, int n_r) {
    if (n_r < 1) throw InvalidArgument("clt_params: n_r must be >= 1");
    const double s1 = rician_moment(model.k(), model.omega(), 1);
    const double s2 = rician_moment(model.k(), model.omega(), 2);
    return GaussianApprox{n_r * s1, n_r * (s2 - s1 * s1)};
}

GammaApprox gamma_params(const FadingModel& model, int n_r) {
    if (n_r < 1) throw InvalidArgument("gamma_params: n_r must be >= 1");
    if (model.is_rayleigh() || model.k() == 0.0) {
        return GammaApprox{1.0 / model.omega(), static_cast<double>(n_r)};
    }
    const auto g = clt_params(model, 1);
    return GammaApprox{g.mean / g.variance, n_r * g.mean * g.mean / g.variance};
}

double sample_sum_gain(const SumGainDistribution& d, RandomStream& rng) {
    const double omega = d.model().omega();
    double sum = 0.0;
    if (d.model().is_rayleigh()) {
        for (int i = 0; i < d.n_r(); ++i) sum -= omega * std::log(rng.uniform_open_closed());
        return sum;
    }
    const double k = d.model().k();
    const double los = std::sqrt(k * omega / (k + 1.0));
    const double sigma = std::sqrt(omega / (2.0 * (k + 1.0)));
    for (int i = 0; i < d.n_r(); ++i) {
        const double re = los + sigma * rng.normal();
        const double im = sigma * rng.normal();
        sum += re * re + im * im;
    }
    return sum;
}

void PilotModel::validate() const {
    if (n_p < 1) throw InvalidArgument("PilotModel: n_p must be >= 1");
    if (!(p_pilot > 0.0) || !std::isfinite(p_pilot)) {
        throw InvalidArgument("PilotModel: p_pilot must be > 0");
    }
}

GainPair sample_joint_gain_estimate(const SumGainDistribution& d, const PilotModel& pilot,
                                    RandomStream& rng) {
    pilot.validate();
    if (d.n_r() != 1 || !d.model().is_rayleigh()) {
        throw InvalidArgument("sample_joint_gain_estimate: only SISO Rayleigh is supported");
    }
    const double omega = d.model().omega();
    const double n_p = pilot.n_p;
    const double p = pilot.p_pilot;
    const double h_sd = std::sqrt(0.5 * omega);
    const double h_re = h_sd * rng.normal();
    const double h_im = h_sd * rng.normal();
    // Sum of the n_p pilot observations: n_p sqrt(p) h + CN(0, n_p).
    const double w_sd = std::sqrt(0.5 * n_p);
    const double y_re = n_p * std::sqrt(p) * h_re + w_sd * rng.normal();
    const double y_im = n_p * std::sqrt(p) * h_im + w_sd * rng.normal();
    const double gain = std::sqrt(p) * omega / (n_p * p * omega + 1.0);
    const double e_re = gain * y_re;
    const double e_im = gain * y_im;
    return GainPair{h_re * h_re + h_im * h_im, e_re * e_re + e_im * e_im};
}

}  // namespace fastharq
