#pragma once

#include <cmath>
#include <cstdint>

namespace fastharq {

struct SimEstimate {
    double mean = 0.0;
    double std_error = 0.0;  ///< sample standard deviation / sqrt(n)
    std::uint64_t n_samples = 0;
};

/// Running mean and variance (Welford); merge() combines partial results (Chan et al.).
class Accumulator {
public:
    void add(double x) {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }

    void merge(const Accumulator& o) {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        const double n = static_cast<double>(n_ + o.n_);
        const double delta = o.mean_ - mean_;
        mean_ += delta * static_cast<double>(o.n_) / n;
        m2_ += o.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(o.n_) / n;
        n_ += o.n_;
    }

    std::uint64_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

    SimEstimate estimate() const {
        SimEstimate e;
        e.n_samples = n_;
        e.mean = mean_;
        e.std_error = n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
        return e;
    }

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace fastharq
