#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fastharq/evaluator.hpp"
#include "fastharq/harq.hpp"

namespace fastharq {

enum class Objective { delay, throughput };

struct OptimizeSpec {
    Objective objective = Objective::delay;
    int grid_points_per_boundary = 64;
    int queen_population = 20;
    int queen_iterations = 200;
    double queen_mutation_scale = 0.05;
    double queen_refresh_fraction = 0.25;
    std::uint64_t seed = 1;

    void validate() const;
};

struct OptimResult {
    Boundaries boundaries = Boundaries::standard(1);
    std::vector<double> levels;  ///< CDF levels u[1] >= ... >= u[M-1] of the boundaries
    double objective_value = 0.0;  ///< expected delay (cu) or throughput (npcu)
    LinkMetrics metrics;
    std::string method;
    std::uint64_t evaluations = 0;
};

/// Every nonincreasing level tuple on the grid j/(g-1), j = 0..g-1. Ties go to the
/// tuple closest to standard HARQ.
OptimResult exhaustive_search(const LinkEvaluator& ev, const OptimizeSpec& opt);
OptimResult exhaustive_search(const LinkSpec& link, double p_cons, const OptimizeSpec& opt);

/// Population search around the best tuple so far with random refreshes; deterministic
/// for a fixed seed. The standard tuple is part of the initial population.
OptimResult queen_search(const LinkEvaluator& ev, const OptimizeSpec& opt);
OptimResult queen_search(const LinkSpec& link, double p_cons, const OptimizeSpec& opt);

/// Exhaustive search over the same level grid for an arbitrary metric function, used
/// where no cached evaluator applies (infinite-blocklength decoding).
OptimResult grid_search(const SumGainDistribution& d, int m_max,
                        const std::function<LinkMetrics(const Boundaries&)>& metrics,
                        const OptimizeSpec& opt);

enum class SearchMethod { exhaustive, queen };

struct ConstrainedResult {
    double p_cons;
    OptimResult result;
};

/// Consumed power meeting the error target, then boundary optimization at that power.
ConstrainedResult solve_constrained(const LinkSpec& link, double beta, const OptimizeSpec& opt,
                                    SearchMethod method = SearchMethod::exhaustive);

}  // namespace fastharq
