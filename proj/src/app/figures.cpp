#include "fastharq/app/figures.hpp"

#include <functional>
#include <map>

#include "fastharq/error.hpp"

namespace fastharq::app {

namespace {

using Kind = FigureSeries::Kind;

std::vector<double> range(double lo, double hi, double step) {
    std::vector<double> v;
    for (double x = lo; x <= hi + 1e-9 * step; x += step) v.push_back(x);
    return v;
}

RunConfig base(int n_r, int sub_len, double big_k, int m_max, double c, double d_fb) {
    RunConfig r;
    r.n_r = n_r;
    r.harq.sub_len = sub_len;
    r.harq.big_k = big_k;
    r.harq.m_max = m_max;
    r.harq.c = c;
    r.harq.d_fb = d_fb;
    r.boundaries.mode = m_max > 1 ? BoundaryMode::optimized : BoundaryMode::standard;
    r.optimize.spec.grid_points_per_boundary = m_max <= 3 ? 64 : 16;
    return r;
}

RunConfig with_std(RunConfig r) {
    r.boundaries.mode = BoundaryMode::standard;
    return r;
}

void non_ideal(RunConfig& r) {
    r.pa.epsilon = 0.75;
    r.pa.theta = 0.5;
    r.pa.p_max_db = 48.0;
}

std::string m_label(int m) { return "M=" + std::to_string(m); }

std::vector<FigureSeries> fig3() {
    std::vector<FigureSeries> out;
    for (bool third : {false, true}) {
        for (int m : {1, 2}) {
            RunConfig r = with_std(base(50, 1000, 500, m, 0.5, 40));
            r.harq.third_order = third;
            r.approximations = true;
            r.sweep = range(-24, -14, 1);
            out.push_back({m_label(m) + (third ? ",third_order" : ""), Kind::analyze, r});
        }
    }
    return out;
}

std::vector<FigureSeries> fig4(bool rician) {
    std::vector<FigureSeries> out;
    for (int m = 1; m <= 5; ++m) {
        RunConfig r = base(12, 1000, 500, m, 0.5, 40);
        r.fading.rician = rician;
        r.sweep = {0.0};
        r.approximations = true;
        out.push_back({m_label(m), Kind::analyze, r});
    }
    return out;
}

std::vector<FigureSeries> fig5() {
    std::vector<FigureSeries> out;
    for (int l : {500, 1000}) {
        RunConfig r = base(1, l, 500, 3, 0.5, 40);
        r.fading.rician = false;
        r.snr_db = 4.0;
        r.axis = SweepAxis::n_r;
        r.sweep = {1, 2, 3, 4, 6, 8, 12, 16, 24, 32};
        r.approximations = true;
        out.push_back({"L=" + std::to_string(l), Kind::analyze, r});
    }
    return out;
}

std::vector<FigureSeries> fig6() {
    std::vector<FigureSeries> out;
    for (bool ideal : {true, false}) {
        for (int m : {1, 2}) {
            RunConfig r = base(40, 1000, 1000, m, 0.5, 40);
            r.harq.asymptotic = true;
            if (!ideal) non_ideal(r);
            r.sweep = range(-22, -10, 1);
            out.push_back({m_label(m) + (ideal ? ",ideal_pa" : ",non_ideal_pa"), Kind::analyze, r});
        }
    }
    return out;
}

std::vector<FigureSeries> fig7() {
    RunConfig r = base(10, 1000, 1000, 2, 0.5, 0);
    r.harq.asymptotic = true;
    r.snr_db = 2.0;
    r.axis = SweepAxis::rate;
    r.sweep = range(0.5, 6, 0.5);
    return {{"asymptotic", Kind::analyze, r}};
}

std::vector<FigureSeries> fig8() {
    RunConfig r = base(10, 1000, 1000, 2, 0.0, 40);
    r.harq.rate = 1.0;
    r.snr_db = 5.0;
    r.axis = SweepAxis::sub_len;
    r.sweep = {100, 200, 500, 1000, 2000, 5000, 10000, 20000, 50000, 100000};
    RunConfig a = r;
    a.harq.asymptotic = true;
    return {{"finite_blocklength", Kind::analyze, r}, {"asymptotic", Kind::analyze, a}};
}

std::vector<FigureSeries> fig9() {
    std::vector<FigureSeries> out;
    for (double k : {500.0, 1000.0}) {
        RunConfig r = base(6, 1000, k, 2, 3.0, 40);
        r.sweep = range(-14, 0, 1);
        out.push_back({"K=" + std::to_string(static_cast<int>(k)), Kind::analyze, r});
        out.push_back({"K=" + std::to_string(static_cast<int>(k)) + ",standard", Kind::analyze,
                       with_std(r)});
    }
    return out;
}

std::vector<FigureSeries> fig10() {
    RunConfig r = base(5, 1000, 1000, 3, 0.5, 40);
    non_ideal(r);
    r.optimize.method = OptimizeMethod::both;
    r.sweep = range(10, 40, 2);
    RunConfig t = r;
    t.optimize.spec.objective = Objective::throughput;
    return {{"delay_objective", Kind::optimize, r}, {"throughput_objective", Kind::optimize, t}};
}

std::vector<FigureSeries> fig11() {
    std::vector<FigureSeries> out;
    for (bool ideal : {true, false}) {
        for (int m : {1, 2}) {
            RunConfig r = base(3, 500, 250, m, 0.5, 0);
            if (!ideal) non_ideal(r);
            r.sweep = range(-6, 10, 1);
            out.push_back({m_label(m) + (ideal ? ",ideal_pa" : ",non_ideal_pa"), Kind::analyze, r});
        }
    }
    return out;
}

std::vector<FigureSeries> fig12() {
    std::vector<FigureSeries> out;
    for (int m : {2, 3}) {
        RunConfig r = base(3, 1000, 1000, m, 3.0, 40);
        r.sweep = range(-4, 12, 1);
        out.push_back({m_label(m) + ",fast", Kind::analyze, r});
        out.push_back({m_label(m) + ",standard", Kind::analyze, with_std(r)});
    }
    return out;
}

std::vector<FigureSeries> fig13() {
    std::vector<FigureSeries> out;
    for (int n : {3, 6}) {
        RunConfig r = base(n, 1000, 1000, 3, 3.0, 40);
        r.optimize.spec.objective = Objective::throughput;
        r.sweep = range(-6, 10, 1);
        out.push_back({"N_r=" + std::to_string(n) + ",fast", Kind::analyze, r});
        out.push_back({"N_r=" + std::to_string(n) + ",standard", Kind::analyze, with_std(r)});
    }
    return out;
}

std::vector<FigureSeries> fig14() {
    std::vector<FigureSeries> out;
    for (int n : {3, 4}) {
        for (int m : {2, 3}) {
            RunConfig r = base(n, 1000, 500, m, 0.5, 40);
            r.sweep = range(-6, 10, 1);
            out.push_back({"N_r=" + std::to_string(n) + "," + m_label(m), Kind::analyze, r});
        }
    }
    return out;
}

std::vector<FigureSeries> fig15() {
    RunConfig r = base(3, 1000, 1000, 2, 3.0, 40);
    r.sweep = range(-4, 12, 1);
    return {{"fast", Kind::analyze, r}};
}

std::vector<FigureSeries> fig16() {
    RunConfig r = base(1, 1000, 500, 2, 1.0, 40);
    r.fading.rician = false;
    r.boundaries.mode = BoundaryMode::explicit_list;
    r.boundaries.interior = {0.25};
    r.snr_db = 0.0;
    r.axis = SweepAxis::n_p;
    r.sweep = {1, 2, 4, 8, 16, 32, 64, 1000};
    r.packets = 1000000;
    return {{"imperfect_csir", Kind::analyze, r}};
}

const std::map<std::string, std::function<std::vector<FigureSeries>()>>& registry() {
    static const std::map<std::string, std::function<std::vector<FigureSeries>()>> r = {
        {"fig3", fig3},   {"fig4a", [] { return fig4(true); }},
        {"fig4b", [] { return fig4(false); }},
        {"fig5", fig5},   {"fig6", fig6},   {"fig7", fig7},   {"fig8", fig8},
        {"fig9", fig9},   {"fig10", fig10}, {"fig11", fig11}, {"fig12", fig12},
        {"fig13", fig13}, {"fig14", fig14}, {"fig15", fig15}, {"fig16", fig16},
    };
    return r;
}

}  // namespace

std::vector<FigureSeries> figure_series(const std::string& name) {
    const auto& r = registry();
    auto it = r.find(name);
    if (it == r.end()) throw InvalidArgument("unknown figure: " + name);
    auto series = it->second();
    for (auto& s : series) s.config.validate();
    return series;
}

std::vector<std::string> figure_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : registry()) names.push_back(k);
    return names;
}

}  // namespace fastharq::app
