#include "fastharq/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "fastharq/error.hpp"
#include "fastharq/power.hpp"
#include "fastharq/rng.hpp"

namespace fastharq {

namespace {

// Lower is better for both objectives.
double score(const LinkMetrics& m, Objective objective) {
    return objective == Objective::delay ? m.expected_delay : -m.throughput;
}

double objective_value(const LinkMetrics& m, Objective objective) {
    return objective == Objective::delay ? m.expected_delay : m.throughput;
}

bool improves(double candidate, double best) {
    return candidate < best - 1e-12 * std::abs(best);
}

OptimResult finish(const LinkEvaluator& ev, std::vector<double> levels, const OptimizeSpec& opt,
                   std::string method, std::uint64_t evaluations) {
    OptimResult r;
    r.boundaries = Boundaries::from_quantiles(ev.link().dist, levels);
    r.levels = std::move(levels);
    r.metrics = ev.metrics(r.boundaries);
    r.objective_value = objective_value(r.metrics, opt.objective);
    r.method = std::move(method);
    r.evaluations = evaluations;
    return r;
}

}  // namespace

void OptimizeSpec::validate() const {
    if (grid_points_per_boundary < 2) throw InvalidArgument("OptimizeSpec: grid_points must be >= 2");
    if (queen_population < 4) throw InvalidArgument("OptimizeSpec: population must be >= 4");
    if (queen_iterations < 0) throw InvalidArgument("OptimizeSpec: iterations must be >= 0");
    if (!(queen_mutation_scale > 0.0 && queen_mutation_scale < 1.0)) {
        throw InvalidArgument("OptimizeSpec: mutation scale must be in (0, 1)");
    }
    if (!(queen_refresh_fraction >= 0.0 && queen_refresh_fraction <= 1.0)) {
        throw InvalidArgument("OptimizeSpec: refresh fraction must be in [0, 1]");
    }
}

OptimResult exhaustive_search(const LinkEvaluator& ev, const OptimizeSpec& opt) {
    opt.validate();
    const int M = ev.link().cfg.m_max;
    const int g = opt.grid_points_per_boundary;
    if (M == 1) return finish(ev, {}, opt, "exhaustive", 1);

    std::vector<double> grid(static_cast<std::size_t>(g));
    for (int j = 0; j < g; ++j) grid[static_cast<std::size_t>(j)] = static_cast<double>(j) / (g - 1);
    const auto cache = ev.at_levels(grid);

    const int k = M - 1;
    // idx[0] >= idx[1] >= ... >= idx[k-1]; enumerated from all-zero (standard) upward.
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    std::vector<int> best_idx = idx;
    double best = score(metrics_from_table(cache.table(idx), ev.link().cfg), opt.objective);
    std::uint64_t evaluations = 1;
    for (;;) {
        // Next nonincreasing tuple in lexicographic order of (idx[0], idx[1], ...).
        int pos = k - 1;
        while (pos >= 0) {
            const int cap = pos == 0 ? g - 1 : idx[static_cast<std::size_t>(pos - 1)];
            if (idx[static_cast<std::size_t>(pos)] < cap) break;
            --pos;
        }
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (int j = pos + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = 0;
        const double v = score(metrics_from_table(cache.table(idx), ev.link().cfg), opt.objective);
        ++evaluations;
        if (improves(v, best)) {
            best = v;
            best_idx = idx;
        }
    }
    std::vector<double> levels;
    for (int j : best_idx) levels.push_back(grid[static_cast<std::size_t>(j)]);
    return finish(ev, std::move(levels), opt, "exhaustive", evaluations);
}

OptimResult exhaustive_search(const LinkSpec& link, double p_cons, const OptimizeSpec& opt) {
    return exhaustive_search(LinkEvaluator(link, p_cons), opt);
}

OptimResult grid_search(const SumGainDistribution& d, int m_max,
                        const std::function<LinkMetrics(const Boundaries&)>& metrics,
                        const OptimizeSpec& opt) {
    opt.validate();
    const int g = opt.grid_points_per_boundary;
    std::vector<double> gains(static_cast<std::size_t>(g));
    for (int j = 0; j < g; ++j) gains[static_cast<std::size_t>(j)] = d.quantile(static_cast<double>(j) / (g - 1));
    const auto k = static_cast<std::size_t>(std::max(m_max - 1, 0));
    std::vector<int> idx(k, 0);
    auto eval = [&](const std::vector<int>& ix) {
        std::vector<double> interior;
        for (int j : ix) interior.push_back(gains[static_cast<std::size_t>(j)]);
        return metrics(Boundaries::from_interior(interior));
    };
    auto best_idx = idx;
    LinkMetrics best_metrics = eval(idx);
    double best = score(best_metrics, opt.objective);
    std::uint64_t evaluations = 1;
    for (;;) {
        int pos = static_cast<int>(k) - 1;
        while (pos >= 0) {
            const int cap = pos == 0 ? g - 1 : idx[static_cast<std::size_t>(pos - 1)];
            if (idx[static_cast<std::size_t>(pos)] < cap) break;
            --pos;
        }
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (std::size_t j = static_cast<std::size_t>(pos) + 1; j < k; ++j) idx[j] = 0;
        const auto m = eval(idx);
        ++evaluations;
        const double v = score(m, opt.objective);
        if (improves(v, best)) {
            best = v;
            best_idx = idx;
            best_metrics = m;
        }
    }
    OptimResult r;
    std::vector<double> interior;
    for (int j : best_idx) {
        r.levels.push_back(static_cast<double>(j) / (g - 1));
        interior.push_back(gains[static_cast<std::size_t>(j)]);
    }
    r.boundaries = Boundaries::from_interior(interior);
    r.metrics = metrics(r.boundaries);
    r.objective_value = objective_value(r.metrics, opt.objective);
    r.method = "exhaustive";
    r.evaluations = evaluations;
    return r;
}

OptimResult queen_search(const LinkEvaluator& ev, const OptimizeSpec& opt) {
    opt.validate();
    const int M = ev.link().cfg.m_max;
    if (M == 1) return finish(ev, {}, opt, "queen", 1);
    const auto k = static_cast<std::size_t>(M - 1);
    const auto& d = ev.link().dist;

    // Quantiles are the expensive part of an evaluation; levels repeat after clamping.
    std::map<double, double> quantiles;
    auto gain_at = [&](double u) {
        auto it = quantiles.find(u);
        if (it != quantiles.end()) return it->second;
        const double x = d.quantile(u);
        quantiles.emplace(u, x);
        return x;
    };
    std::uint64_t evaluations = 0;
    auto evaluate = [&](const std::vector<double>& levels) {
        std::vector<double> interior;
        interior.reserve(k);
        for (double u : levels) interior.push_back(gain_at(u));
        ++evaluations;
        return score(ev.metrics(Boundaries::from_interior(interior)), opt.objective);
    };
    RandomStream rng(opt.seed, 0x71ee);
    auto normalize = [](std::vector<double>& levels) {
        for (double& u : levels) u = std::clamp(u, 0.0, 1.0);
        std::sort(levels.begin(), levels.end(), std::greater<>());
    };
    auto random_tuple = [&] {
        std::vector<double> levels(k);
        for (double& u : levels) u = rng.uniform();
        normalize(levels);
        return levels;
    };

    std::vector<double> queen(k, 0.0);
    double queen_score = evaluate(queen);
    for (int p = 1; p < opt.queen_population; ++p) {
        auto cand = random_tuple();
        const double v = evaluate(cand);
        if (improves(v, queen_score)) {
            queen_score = v;
            queen = std::move(cand);
        }
    }
    const int offspring = opt.queen_population - 1;
    const int refresh = static_cast<int>(std::lround(opt.queen_refresh_fraction * opt.queen_population));
    for (int it = 0; it < opt.queen_iterations; ++it) {
        auto best = queen;
        double best_score = queen_score;
        for (int c = 0; c < offspring; ++c) {
            std::vector<double> cand;
            if (c < offspring - refresh) {
                cand = queen;
                for (double& u : cand) u += opt.queen_mutation_scale * rng.normal();
                normalize(cand);
            } else {
                cand = random_tuple();
            }
            const double v = evaluate(cand);
            if (improves(v, best_score)) {
                best_score = v;
                best = std::move(cand);
            }
        }
        queen = std::move(best);
        queen_score = best_score;
    }
    return finish(ev, std::move(queen), opt, "queen", evaluations);
}

OptimResult queen_search(const LinkSpec& link, double p_cons, const OptimizeSpec& opt) {
    return queen_search(LinkEvaluator(link, p_cons), opt);
}

ConstrainedResult solve_constrained(const LinkSpec& link, double beta, const OptimizeSpec& opt,
                                    SearchMethod method) {
    const double p_cons = solve_p_cons_for_beta(link, beta);
    const LinkEvaluator ev(link, p_cons);
    return ConstrainedResult{p_cons, method == SearchMethod::exhaustive ? exhaustive_search(ev, opt)
                                                                        : queen_search(ev, opt)};
}

}  // namespace fastharq
