#include "fastharq/harq.hpp"

#include <cmath>
#include <limits>

#include "fastharq/error.hpp"

namespace fastharq {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void HarqConfig::validate() const {
    if (m_max < 1) throw InvalidArgument("HarqConfig: M must be >= 1");
    code.validate();
    if (!(d_fb >= 0.0) || !std::isfinite(d_fb)) throw InvalidArgument("HarqConfig: D must be >= 0");
    if (!(decode_delay.c >= 0.0) || !std::isfinite(decode_delay.c)) {
        throw InvalidArgument("HarqConfig: decoding delay coefficient must be >= 0");
    }
}

double HarqConfig::packet_delay(int m, int i) const {
    if (m < 1 || m > m_max || i < m || i > m_max) {
        throw InvalidArgument("packet_delay: need 1 <= m <= i <= M");
    }
    double delay = static_cast<double>(i) * code.sub_len;
    for (int j = m; j <= i; ++j) delay += lambda_round(j);
    const int feedbacks = i < m_max ? i - m + 1 : m_max - m;
    return delay + feedbacks * d_fb;
}

Boundaries::Boundaries(std::vector<double> q) : q_(std::move(q)) {
    for (std::size_t i = 1; i + 1 < q_.size(); ++i) {
        if (std::isnan(q_[i]) || q_[i] < 0.0) {
            throw InvalidArgument("Boundaries: thresholds must be >= 0");
        }
        if (q_[i] > q_[i - 1]) throw InvalidArgument("Boundaries: thresholds must be nonincreasing");
    }
}

Boundaries Boundaries::standard(int m_max) {
    if (m_max < 1) throw InvalidArgument("Boundaries: M must be >= 1");
    std::vector<double> q(static_cast<std::size_t>(m_max) + 1, 0.0);
    q.front() = kInf;
    return Boundaries(std::move(q));
}

Boundaries Boundaries::from_interior(std::span<const double> interior) {
    std::vector<double> q;
    q.reserve(interior.size() + 2);
    q.push_back(kInf);
    q.insert(q.end(), interior.begin(), interior.end());
    q.push_back(0.0);
    return Boundaries(std::move(q));
}

Boundaries Boundaries::from_quantiles(const SumGainDistribution& d,
                                      std::span<const double> levels) {
    std::vector<double> interior;
    interior.reserve(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (i > 0 && levels[i] > levels[i - 1]) {
            throw InvalidArgument("Boundaries: quantile levels must be nonincreasing");
        }
        interior.push_back(d.quantile(levels[i]));
    }
    return from_interior(interior);
}

Boundaries Boundaries::uniform(const SumGainDistribution& d, int m_max) {
    if (m_max < 1) throw InvalidArgument("Boundaries: M must be >= 1");
    std::vector<double> levels;
    for (int i = 1; i < m_max; ++i) levels.push_back(1.0 - static_cast<double>(i) / m_max);
    return from_quantiles(d, levels);
}

std::vector<double> Boundaries::interior() const {
    return std::vector<double>(q_.begin() + 1, q_.end() - 1);
}

bool Boundaries::is_standard() const {
    for (std::size_t i = 1; i + 1 < q_.size(); ++i) {
        if (q_[i] != 0.0) return false;
    }
    return true;
}

int Boundaries::region_of(double g) const {
    for (int m = 1; m <= m_max(); ++m) {
        if (g >= q_[static_cast<std::size_t>(m)]) return m;
    }
    return m_max();
}

void LinkSpec::validate() const {
    pa.validate();
    cfg.validate();
}

}  // namespace fastharq
