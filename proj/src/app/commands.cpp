#include "fastharq/app/commands.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fastharq/analysis.hpp"
#include "fastharq/app/figures.hpp"
#include "fastharq/error.hpp"
#include "fastharq/evaluator.hpp"
#include "fastharq/montecarlo.hpp"
#include "fastharq/optimize.hpp"
#include "fastharq/parallel.hpp"
#include "fastharq/specfun.hpp"

namespace fastharq::app {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Point {
    double snr_db;
    double p_cons;
    int n_r;
    int n_p;
    LinkSpec link;
};

Point make_point(const RunConfig& c, double value) {
    double snr = c.snr_db;
    int n_r = c.n_r;
    int n_p = c.pilot.n_p;
    HarqConfig h;
    h.m_max = c.harq.m_max;
    h.code = CodeSpec{c.harq.big_k, c.harq.sub_len, c.harq.third_order};
    h.d_fb = c.harq.d_fb;
    h.decode_delay.c = c.harq.c;
    switch (c.axis) {
        case SweepAxis::snr_db: snr = value; break;
        case SweepAxis::sub_len: h.code.sub_len = static_cast<int>(value); break;
        case SweepAxis::n_r: n_r = static_cast<int>(value); break;
        case SweepAxis::n_p: n_p = static_cast<int>(value); break;
        case SweepAxis::rate: h.code.big_k = value * h.code.sub_len; break;
    }
    if (c.harq.rate && c.axis != SweepAxis::rate) h.code.big_k = *c.harq.rate * h.code.sub_len;
    return Point{snr, db_to_linear(snr), n_r, n_p,
                 LinkSpec{SumGainDistribution(c.fading.model(), n_r), c.pa.config(), h}};
}

Table::Row point_columns(const RunConfig& c, const Point& p, double value) {
    Table::Row row;
    row.push_back({{to_string(c.axis), c.axis == SweepAxis::snr_db  ? "dB"
                                       : c.axis == SweepAxis::sub_len ? "cu"
                                       : c.axis == SweepAxis::rate    ? "npcu"
                                                                      : "count"},
                   value});
    if (c.axis != SweepAxis::snr_db) row.push_back({{"snr_db", "dB"}, p.snr_db});
    row.push_back({{"total_snr_db", "dB"}, linear_to_db(p.n_r * p.p_cons)});
    row.push_back({{"m_max", "count"}, static_cast<long long>(p.link.cfg.m_max)});
    return row;
}

void add_boundaries(Table::Row& row, const Boundaries& b, const std::string& prefix = "q") {
    for (int i = 1; i < b.m_max(); ++i) row.push_back({{prefix + std::to_string(i), "gain"}, b[i]});
}

void add_metrics(Table::Row& row, const LinkMetrics& m, const std::string& suffix = "") {
    row.push_back({{"error_prob" + suffix, "probability"}, m.error_prob});
    row.push_back({{"expected_delay" + suffix, "cu"}, m.expected_delay});
    row.push_back({{"throughput" + suffix, "npcu"}, m.throughput});
    row.push_back({{"constrained_delay" + suffix, "cu"},
                   m.constrained_delay ? Cell(*m.constrained_delay) : Cell()});
}

OptimResult optimize_at(const RunConfig& c, const LinkEvaluator& ev) {
    if (c.optimize.method == OptimizeMethod::queen) return queen_search(ev, c.optimize.spec);
    return exhaustive_search(ev, c.optimize.spec);
}

AsymptoticMetrics asymptotic_at(const Point& p, const Boundaries& b) {
    return asymptotic_metrics(p.link.dist, b, p.link.cfg, p.link.pa, p.p_cons);
}

Boundaries fixed_boundaries(const RunConfig& c, const SumGainDistribution& d, int m_max) {
    switch (c.boundaries.mode) {
        case BoundaryMode::standard: return Boundaries::standard(m_max);
        case BoundaryMode::uniform: return Boundaries::uniform(d, m_max);
        case BoundaryMode::explicit_list: return Boundaries::from_interior(c.boundaries.interior);
        case BoundaryMode::optimized: break;
    }
    throw InvalidArgument("optimized boundaries have no fixed value");
}

// int_a^b pdf(x) Q_n(x) dx for an approximating density with the given mean and spread.
double approx_integral(const std::function<double(double)>& pdf, double mean, double sd, double a,
                       double b, int n, const HarqConfig& cfg, double p) {
    const double hi = std::min(b, mean + 40.0 * sd);
    a = std::max(a, mean - 40.0 * sd);
    if (!(hi > a)) return 0.0;
    std::vector<double> interior;
    for (int j = -12; j <= 12; ++j) interior.push_back(mean + j * sd);
    const double alpha = std::expm1(cfg.code.rate(n)) / p;
    const double w = 1.0 / std::sqrt(n * static_cast<double>(cfg.code.sub_len));
    for (int j = -16; j <= 16; ++j) interior.push_back(alpha * (1.0 + j * w));
    const auto breaks = quad::make_breaks(a, hi, interior);
    auto f = [&](double x) { return pdf(x) * round_error_prob(x, n, cfg.code, p); };
    return quad::integrate(f, std::span<const double>(breaks), kRegionTolerance).value;
}

void add_approximations(Table::Row& row, const Point& p, const Boundaries& b) {
    const auto& cfg = p.link.cfg;
    const auto& d = p.link.dist;
    const double pw = output_power(p.link.pa, p.p_cons);
    const int M = cfg.m_max;
    const auto gauss = clt_params(d.model(), d.n_r());
    const auto gam = gamma_params(d.model(), d.n_r());
    const double sd = std::sqrt(gauss.variance);
    auto gauss_pdf = [&](double x) { return gauss.pdf(x); };
    auto gamma_pdf = [&](double x) { return gam.pdf(x); };
    auto gauss_mass = [&](double lo, double hi) {
        return std::max(0.0, gauss.cdf(hi) - gauss.cdf(lo));
    };
    auto gamma_mass = [&](double lo, double hi) {
        return std::max(0.0, gam.cdf(hi) - gam.cdf(lo));
    };

    const double e_clt = approx_integral(gauss_pdf, gauss.mean, sd, 0.0, kInf, M, cfg, pw);
    const double e_gamma = approx_integral(gamma_pdf, gauss.mean, sd, 0.0, kInf, M, cfg, pw);
    const double e_l3 = y_lemma3(gauss, 0.0, kInf, M, cfg, p.link.pa, p.p_cons);
    row.push_back({{"clt_error_prob", "probability"}, e_clt});
    row.push_back({{"gamma_error_prob", "probability"}, e_gamma});
    row.push_back({{"lemma3_error_prob", "probability"}, e_l3});

    const auto t_clt = build_region_table(
        b, [&](double lo, double hi, int n) {
            return approx_integral(gauss_pdf, gauss.mean, sd, lo, hi, n, cfg, pw);
        },
        gauss_mass, e_clt);
    const auto t_gamma = build_region_table(
        b, [&](double lo, double hi, int n) {
            return approx_integral(gamma_pdf, gauss.mean, sd, lo, hi, n, cfg, pw);
        },
        gamma_mass, e_gamma);
    const auto t_l3 = build_region_table(
        b, [&](double lo, double hi, int n) {
            return y_lemma3(gauss, lo, hi, n, cfg, p.link.pa, p.p_cons);
        },
        gauss_mass, e_l3);
    row.push_back({{"clt_expected_delay", "cu"}, expected_delay_from_table(t_clt, cfg)});
    row.push_back({{"gamma_expected_delay", "cu"}, expected_delay_from_table(t_gamma, cfg)});
    row.push_back({{"lemma3_expected_delay", "cu"}, expected_delay_from_table(t_l3, cfg)});
    if (d.model().is_rayleigh()) {
        auto l4 = [&](double lo, double hi, int n) {
            return y_lemma4(d.model(), d.n_r(), lo, hi, n, cfg, p.link.pa, p.p_cons);
        };
        const double e_l4 = l4(0.0, kInf, M);
        const auto t_l4 = build_region_table(
            b, l4, [&](double lo, double hi) { return std::max(0.0, d.cdf(hi) - d.cdf(lo)); },
            e_l4);
        row.push_back({{"lemma4_error_prob", "probability"}, e_l4});
        row.push_back({{"lemma4_expected_delay", "cu"}, expected_delay_from_table(t_l4, cfg)});
    }
    const auto asym = asymptotic_metrics(d, b, cfg, p.link.pa, p.p_cons);
    row.push_back({{"asymptotic_error_prob", "probability"}, asym.metrics.error_prob});
    row.push_back({{"asymptotic_clt_error_prob", "probability"}, asym.clt_error});
    row.push_back({{"asymptotic_throughput", "npcu"}, asym.metrics.throughput});
}

Table::Row analyze_point(const RunConfig& c, double value) {
    const Point p = make_point(c, value);
    const int M = p.link.cfg.m_max;
    Table::Row row = point_columns(c, p, value);
    row.push_back({{"p_cons", "linear"}, p.p_cons});

    if (c.harq.asymptotic) {
        Boundaries b = Boundaries::standard(M);
        if (c.boundaries.mode == BoundaryMode::optimized) {
            b = grid_search(p.link.dist, M,
                            [&](const Boundaries& bb) { return asymptotic_at(p, bb).metrics; },
                            c.optimize.spec)
                    .boundaries;
        } else {
            b = fixed_boundaries(c, p.link.dist, M);
        }
        const auto fast = asymptotic_at(p, b);
        const auto std_m = asymptotic_at(p, Boundaries::standard(M));
        add_metrics(row, fast.metrics);
        row.push_back({{"expected_delay_standard", "cu"}, std_m.metrics.expected_delay});
        row.push_back({{"throughput_standard", "npcu"}, std_m.metrics.throughput});
        row.push_back({{"relative_gain", "fraction"},
                       relative_gain(std_m.metrics.expected_delay, fast.metrics.expected_delay)});
        row.push_back({{"clt_error_prob", "probability"}, fast.clt_error});
        add_boundaries(row, b);
        return row;
    }

    const LinkEvaluator ev(p.link, p.p_cons);
    const Boundaries b = c.boundaries.mode == BoundaryMode::optimized
                             ? optimize_at(c, ev).boundaries
                             : fixed_boundaries(c, p.link.dist, M);
    const auto m = ev.metrics(b);
    const auto s = ev.metrics(Boundaries::standard(M));
    const auto u = ev.unnecessary(b);
    add_metrics(row, m);
    row.push_back({{"expected_delay_standard", "cu"}, s.expected_delay});
    row.push_back({{"throughput_standard", "npcu"}, s.throughput});
    row.push_back({{"constrained_delay_standard", "cu"},
                   s.constrained_delay ? Cell(*s.constrained_delay) : Cell()});
    row.push_back({{"relative_gain", "fraction"}, relative_gain(s.expected_delay, m.expected_delay)});
    row.push_back({{"unnecessary_prob", "probability"}, u.probability});
    row.push_back({{"unnecessary_energy", "p_cons"}, u.energy});
    if (c.axis == SweepAxis::n_p) {
        const auto est = expected_delay_imperfect_csir(p.link.dist, PilotModel{p.n_p, c.pilot.p_pilot},
                                                       b, p.link.pa, p.p_cons, p.link.cfg,
                                                       c.packets, c.seed);
        row.push_back({{"imperfect_csir_expected_delay", "cu"}, est.mean});
        row.push_back({{"imperfect_csir_expected_delay_se", "cu"}, est.std_error});
    }
    add_boundaries(row, b);
    if (c.approximations) add_approximations(row, p, b);
    return row;
}

Table::Row simulate_point(const RunConfig& c, double value) {
    const Point p = make_point(c, value);
    const int M = p.link.cfg.m_max;
    Table::Row row = point_columns(c, p, value);
    row.push_back({{"config_hash", ""}, config_hash(c)});
    row.push_back({{"seed", ""}, std::to_string(c.seed)});
    row.push_back({{"packets", "count"}, static_cast<long long>(c.packets)});

    const LinkEvaluator ev(p.link, p.p_cons);
    const Boundaries b = c.boundaries.mode == BoundaryMode::optimized
                             ? optimize_at(c, ev).boundaries
                             : fixed_boundaries(c, p.link.dist, M);
    const bool imperfect = c.axis == SweepAxis::n_p;
    const SimMetrics s =
        imperfect ? estimate_metrics_imperfect_csir(p.link.dist, PilotModel{p.n_p, c.pilot.p_pilot}, b,
                                                    p.link.pa, p.p_cons, p.link.cfg, c.packets,
                                                    c.seed)
                  : estimate_metrics(p.link.dist, b, p.link.pa, p.p_cons, p.link.cfg, c.packets,
                                     c.seed);
    auto est = [&](const std::string& name, const std::string& unit, const SimEstimate& e) {
        row.push_back({{name, unit}, e.mean});
        row.push_back({{name + "_se", unit}, e.std_error});
    };
    est("sim_error_prob", "probability", s.error);
    est("sim_expected_delay", "cu", s.delay);
    row.push_back({{"sim_throughput", "npcu"}, s.throughput});
    if (s.constrained_delay.n_samples > 0) {
        est("sim_constrained_delay", "cu", s.constrained_delay);
    }
    est("sim_unnecessary_prob", "probability", s.unnecessary_prob);
    est("sim_unnecessary_energy", "p_cons", s.unnecessary_energy);

    if (imperfect) {
        const auto a = expected_delay_imperfect_csir(p.link.dist, PilotModel{p.n_p, c.pilot.p_pilot},
                                                     b, p.link.pa, p.p_cons, p.link.cfg, c.packets,
                                                     c.seed + 1);
        row.push_back({{"imperfect_csir_expected_delay", "cu"}, a.mean});
        row.push_back({{"imperfect_csir_expected_delay_se", "cu"}, a.std_error});
    } else {
        const auto m = ev.metrics(b);
        const auto u = ev.unnecessary(b);
        add_metrics(row, m);
        row.push_back({{"unnecessary_prob", "probability"}, u.probability});
        row.push_back({{"unnecessary_energy", "p_cons"}, u.energy});
    }
    add_boundaries(row, b);
    return row;
}

Table::Row optimize_point(const RunConfig& c, double value, bool& infeasible) {
    Point p = make_point(c, value);
    const int M = p.link.cfg.m_max;
    infeasible = false;
    if (c.optimize.beta) {
        try {
            p.p_cons = solve_p_cons_for_beta(p.link, *c.optimize.beta);
            p.snr_db = linear_to_db(p.p_cons);
        } catch (const Infeasible& e) {
            infeasible = true;
            p.p_cons = e.p_cons();
        } catch (const NonBracketed&) {
            infeasible = true;
            p.p_cons = std::numeric_limits<double>::quiet_NaN();
        }
    }
    Table::Row row;
    row.push_back({{to_string(c.axis), c.axis == SweepAxis::snr_db  ? "dB"
                                       : c.axis == SweepAxis::sub_len ? "cu"
                                       : c.axis == SweepAxis::rate    ? "npcu"
                                                                      : "count"},
                   value});
    if (c.optimize.beta) row.push_back({{"beta", "probability"}, *c.optimize.beta});
    row.push_back({{"p_cons_db", "dB"}, p.snr_db});
    row.push_back({{"total_snr_db", "dB"}, linear_to_db(p.n_r * p.p_cons)});
    row.push_back({{"m_max", "count"}, static_cast<long long>(M)});
    row.push_back({{"status", ""}, std::string(infeasible ? "infeasible" : "ok")});
    if (infeasible) return row;

    const LinkEvaluator ev(p.link, p.p_cons);
    const bool delay = c.optimize.spec.objective == Objective::delay;
    const std::string unit = delay ? "cu" : "npcu";
    std::vector<OptimResult> results;
    if (c.optimize.method != OptimizeMethod::queen) results.push_back(exhaustive_search(ev, c.optimize.spec));
    if (c.optimize.method != OptimizeMethod::exhaustive) results.push_back(queen_search(ev, c.optimize.spec));
    const auto s = ev.metrics(Boundaries::standard(M));
    const auto& best = results.front();
    row.push_back({{"method", ""}, best.method});
    row.push_back({{"objective", unit}, best.objective_value});
    row.push_back({{"evaluations", "count"}, static_cast<long long>(best.evaluations)});
    add_boundaries(row, best.boundaries);
    for (std::size_t i = 0; i < best.levels.size(); ++i) {
        row.push_back({{"u" + std::to_string(i + 1), "probability"}, best.levels[i]});
    }
    add_metrics(row, best.metrics);
    row.push_back({{"expected_delay_standard", "cu"}, s.expected_delay});
    row.push_back({{"throughput_standard", "npcu"}, s.throughput});
    row.push_back({{"relative_gain", "fraction"},
                   relative_gain(s.expected_delay, best.metrics.expected_delay)});
    if (results.size() == 2) {
        const auto& q = results[1];
        row.push_back({{"queen_objective", unit}, q.objective_value});
        row.push_back({{"queen_evaluations", "count"}, static_cast<long long>(q.evaluations)});
        add_boundaries(row, q.boundaries, "queen_q");
        row.push_back({{"queen_relative_difference", "fraction"},
                       (q.objective_value - best.objective_value) / best.objective_value});
    }
    return row;
}

CommandOutput collect(const std::vector<Table::Row>& rows, int infeasible) {
    CommandOutput out;
    for (const auto& r : rows) out.table.add_row(r);
    out.rows = static_cast<int>(rows.size());
    out.infeasible_rows = infeasible;
    return out;
}

}  // namespace

CommandOutput cmd_analyze(const RunConfig& config) {
    config.validate();
    return collect(parallel_map<Table::Row>(config.sweep.size(),
                                            [&](std::size_t i) { return analyze_point(config, config.sweep[i]); }),
                   0);
}

CommandOutput cmd_simulate(const RunConfig& config) {
    config.validate();
    std::vector<Table::Row> rows;
    for (double v : config.sweep) rows.push_back(simulate_point(config, v));
    return collect(rows, 0);
}

CommandOutput cmd_optimize(const RunConfig& config) {
    config.validate();
    std::vector<char> flags(config.sweep.size(), 0);
    auto rows = parallel_map<Table::Row>(config.sweep.size(), [&](std::size_t i) {
        bool inf = false;
        auto r = optimize_point(config, config.sweep[i], inf);
        flags[i] = inf ? 1 : 0;
        return r;
    });
    int infeasible = 0;
    for (char f : flags) infeasible += f;
    return collect(rows, infeasible);
}

CommandOutput cmd_figure(const std::string& name, const Overrides& overrides) {
    CommandOutput out;
    for (auto series : figure_series(name)) {
        overrides.apply(series.config);
        CommandOutput part;
        switch (series.kind) {
            case FigureSeries::Kind::analyze: part = cmd_analyze(series.config); break;
            case FigureSeries::Kind::simulate: part = cmd_simulate(series.config); break;
            case FigureSeries::Kind::optimize: part = cmd_optimize(series.config); break;
        }
        Table labelled;
        for (std::size_t r = 0; r < part.table.rows().size(); ++r) {
            Table::Row row{{{"series", ""}, series.label}};
            for (std::size_t i = 0; i < part.table.columns().size(); ++i) {
                const auto& cell = part.table.rows()[r][i];
                if (!std::holds_alternative<std::monostate>(cell)) {
                    row.emplace_back(part.table.columns()[i], cell);
                }
            }
            labelled.add_row(row);
        }
        out.table.append(labelled);
        out.rows += part.rows;
        out.infeasible_rows += part.infeasible_rows;
    }
    return out;
}

}  // namespace fastharq::app
