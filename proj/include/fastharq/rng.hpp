#pragma once

#include <cstdint>
#include <random>

namespace fastharq {

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Caller-owned random stream. Streams keyed by distinct (seed, index) pairs are
/// independent, so per-packet streams reproduce regardless of scheduling.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t index = 0)
        : engine_(mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL))) {}

    /// Uniform on (0, 1].
    double uniform_open_closed() { return 1.0 - std::generate_canonical<double, 53>(engine_); }

    /// Uniform on [0, 1).
    double uniform() { return std::generate_canonical<double, 53>(engine_); }

    double normal() { return normal_(engine_); }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace fastharq
