#include "fastharq/montecarlo.hpp"

#include <algorithm>
#include <optional>

#include "fastharq/error.hpp"
#include "fastharq/fbl.hpp"
#include "fastharq/parallel.hpp"

namespace fastharq {

namespace {

constexpr std::uint64_t kChunk = 4096;

PacketTrace run_protocol(double gain, int m, double p, const HarqConfig& cfg, RandomStream& rng) {
    const int M = cfg.m_max;
    const double u = rng.uniform();
    PacketTrace t;
    t.gain = gain;
    t.region = m;
    std::optional<int> first_decodable;
    std::optional<int> stop;
    for (int n = 1; n <= M; ++n) {
        if (u >= round_error_prob(gain, n, cfg.code, p)) {
            if (!first_decodable) first_decodable = n;
            if (n >= m) {
                stop = n;
                break;
            }
        }
    }
    t.decoded = stop.has_value();
    t.stop_round = stop.value_or(M);
    t.delay = cfg.packet_delay(m, t.stop_round);
    t.feedback_count = t.stop_round < M ? t.stop_round - m + 1 : M - m;
    t.wasted_rounds = first_decodable ? std::max(0, m - *first_decodable) : 0;
    return t;
}

struct SimAccumulator {
    Accumulator error, delay, constrained, unnecessary, energy;

    void add(const PacketTrace& t, double p_cons) {
        error.add(t.decoded ? 0.0 : 1.0);
        delay.add(t.delay);
        if (t.decoded) constrained.add(t.delay);
        unnecessary.add(t.wasted_rounds > 0 ? 1.0 : 0.0);
        energy.add(t.wasted_rounds * p_cons);
    }

    void merge(const SimAccumulator& o) {
        error.merge(o.error);
        delay.merge(o.delay);
        constrained.merge(o.constrained);
        unnecessary.merge(o.unnecessary);
        energy.merge(o.energy);
    }
};

SimMetrics summarize(const SimAccumulator& acc, double big_k) {
    SimMetrics s;
    s.error = acc.error.estimate();
    s.delay = acc.delay.estimate();
    s.constrained_delay = acc.constrained.estimate();
    s.unnecessary_prob = acc.unnecessary.estimate();
    s.unnecessary_energy = acc.energy.estimate();
    s.throughput = s.delay.mean > 0.0 ? big_k * (1.0 - s.error.mean) / s.delay.mean : 0.0;
    return s;
}

void check_inputs(const Boundaries& b, const PaConfig& pa, const HarqConfig& cfg) {
    pa.validate();
    cfg.validate();
    if (b.m_max() != cfg.m_max) throw InvalidArgument("boundaries do not match M");
}

}  // namespace

double packet_delay(const HarqConfig& cfg, int m, int i) { return cfg.packet_delay(m, i); }

PacketTrace simulate_packet(const SumGainDistribution& d, const Boundaries& b, const PaConfig& pa,
                            double p_cons, const HarqConfig& cfg, RandomStream& rng) {
    const double gain = sample_sum_gain(d, rng);
    return run_protocol(gain, b.region_of(gain), output_power(pa, p_cons), cfg, rng);
}

PacketTrace simulate_packet_imperfect_csir(const SumGainDistribution& d, const PilotModel& pilot,
                                           const Boundaries& b, const PaConfig& pa,
                                           double p_cons, const HarqConfig& cfg,
                                           RandomStream& rng) {
    const auto s = sample_joint_gain_estimate(d, pilot, rng);
    return run_protocol(s.gain, b.region_of(s.estimate), output_power(pa, p_cons), cfg, rng);
}

SimMetrics estimate_metrics(const SumGainDistribution& d, const Boundaries& b, const PaConfig& pa,
                            double p_cons, const HarqConfig& cfg, std::uint64_t n_packets,
                            std::uint64_t seed) {
    check_inputs(b, pa, cfg);
    if (n_packets < 1) throw InvalidArgument("estimate_metrics: n_packets must be >= 1");
    const double p = output_power(pa, p_cons);
    auto work = [&](std::uint64_t begin, std::uint64_t end) {
        SimAccumulator acc;
        for (std::uint64_t j = begin; j < end; ++j) {
            RandomStream rng(seed, j);
            const double gain = sample_sum_gain(d, rng);
            acc.add(run_protocol(gain, b.region_of(gain), p, cfg, rng), p_cons);
        }
        return acc;
    };
    return summarize(reduce_chunks<SimAccumulator>(n_packets, kChunk, work), cfg.code.big_k);
}

SimMetrics estimate_metrics_imperfect_csir(const SumGainDistribution& d, const PilotModel& pilot,
                                           const Boundaries& b, const PaConfig& pa,
                                           double p_cons, const HarqConfig& cfg,
                                           std::uint64_t n_packets, std::uint64_t seed) {
    check_inputs(b, pa, cfg);
    if (n_packets < 1) throw InvalidArgument("estimate_metrics: n_packets must be >= 1");
    const double p = output_power(pa, p_cons);
    auto work = [&](std::uint64_t begin, std::uint64_t end) {
        SimAccumulator acc;
        for (std::uint64_t j = begin; j < end; ++j) {
            RandomStream rng(seed, j);
            const auto s = sample_joint_gain_estimate(d, pilot, rng);
            acc.add(run_protocol(s.gain, b.region_of(s.estimate), p, cfg, rng), p_cons);
        }
        return acc;
    };
    return summarize(reduce_chunks<SimAccumulator>(n_packets, kChunk, work), cfg.code.big_k);
}

}  // namespace fastharq
