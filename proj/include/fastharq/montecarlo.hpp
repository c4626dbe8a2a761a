#pragma once

#include <cstdint>

#include "fastharq/channel.hpp"
#include "fastharq/harq.hpp"
#include "fastharq/power.hpp"
#include "fastharq/rng.hpp"
#include "fastharq/stats.hpp"

namespace fastharq {

struct PacketTrace {
    double gain = 0.0;      ///< true sum gain G
    int region = 1;         ///< m: round of the first decode attempt
    int stop_round = 1;     ///< i: last round transmitted
    bool decoded = false;
    double delay = 0.0;     ///< channel uses
    int feedback_count = 0;
    int wasted_rounds = 0;  ///< m minus the first decodable round, if positive
};

/// One packet: draw G, pick its region, draw one latent uniform U; round n decodes iff
/// U >= round_error_prob(G, n). Decoding is attempted from round m until success or M.
PacketTrace simulate_packet(const SumGainDistribution& d, const Boundaries& b, const PaConfig& pa,
                            double p_cons, const HarqConfig& cfg, RandomStream& rng);

/// As simulate_packet, with the region chosen from the pilot-based estimate of G.
PacketTrace simulate_packet_imperfect_csir(const SumGainDistribution& d, const PilotModel& pilot,
                                           const Boundaries& b, const PaConfig& pa,
                                           double p_cons, const HarqConfig& cfg,
                                           RandomStream& rng);

/// Stop-round delay, recomputed from (m, i).
double packet_delay(const HarqConfig& cfg, int m, int i);

struct SimMetrics {
    SimEstimate error;
    SimEstimate delay;
    double throughput = 0.0;      ///< K * success fraction / mean delay
    SimEstimate constrained_delay;  ///< over decoded packets only
    SimEstimate unnecessary_prob;
    SimEstimate unnecessary_energy;
};

/// Aggregates n_packets traces; packet j uses RandomStream(seed, j), so results do not
/// depend on the number of worker threads.
SimMetrics estimate_metrics(const SumGainDistribution& d, const Boundaries& b, const PaConfig& pa,
                            double p_cons, const HarqConfig& cfg, std::uint64_t n_packets,
                            std::uint64_t seed);

SimMetrics estimate_metrics_imperfect_csir(const SumGainDistribution& d, const PilotModel& pilot,
                                           const Boundaries& b, const PaConfig& pa,
                                           double p_cons, const HarqConfig& cfg,
                                           std::uint64_t n_packets, std::uint64_t seed);

}  // namespace fastharq
