// Acceptance checks AC1-AC11; one PASS/FAIL line per criterion.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fastharq/analysis.hpp"
#include "fastharq/evaluator.hpp"
#include "fastharq/montecarlo.hpp"
#include "fastharq/optimize.hpp"
#include "fastharq/power.hpp"

using namespace fastharq;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int failures = 0;

void report(int ac, bool ok, const std::string& detail) {
    std::printf("AC%d %s %s\n", ac, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

LinkSpec link(FadingModel model, int n_r, int m, int sub_len, double big_k, double d_fb, double c,
              PaConfig pa = {}) {
    HarqConfig h;
    h.m_max = m;
    h.code = CodeSpec{big_k, sub_len, false};
    h.d_fb = d_fb;
    h.decode_delay.c = c;
    return LinkSpec{SumGainDistribution(model, n_r), pa, h};
}

OptimizeSpec grid_for(int m) {
    OptimizeSpec s;
    s.grid_points_per_boundary = m <= 3 ? 64 : 16;
    return s;
}

// |est - ref| within k standard errors; a binomial error under the reference value is
// used when no events were observed.
bool within(const SimEstimate& e, double ref, double binomial_se = 0.0, double k = 3.0) {
    const double se = std::max(e.std_error, binomial_se);
    return std::abs(e.mean - ref) <= k * se + 1e-12 * std::abs(ref);
}

double binomial_se(double p, std::uint64_t n) { return std::sqrt(p * (1 - p) / static_cast<double>(n)); }

void ac1() {
    const double target[] = {0, 0, 3.0 / 11, 6.0 / 14, 9.0 / 17, 12.0 / 20};
    bool ok = true;
    std::string detail;
    for (const auto& [name, model] :
         {std::pair{"rayleigh", FadingModel::rayleigh()}, std::pair{"rician", FadingModel::rician(0.01)}}) {
        for (int m = 2; m <= 5; ++m) {
            const auto l = link(model, 3, m, 1000, 1000, 40, 3.0);
            const LinkEvaluator ev(l, db_to_linear(-30));
            const auto r = exhaustive_search(ev, grid_for(m));
            const double g = relative_gain(ev.metrics(Boundaries::standard(m)).expected_delay, r.objective_value);
            ok = ok && std::abs(g - target[m]) <= 0.01 && std::abs(lemma6_limit(m, 3.0) - target[m]) < 1e-15;
            detail += std::string(" ") + name + fmt(":M%.0f=%.2f%%", m, 100 * g);
        }
    }
    report(1, ok, "gains" + detail);
}

void ac2() {
    bool ok = true;
    std::string detail;
    const std::uint64_t n = 1000000;
    for (double db : {0.0, -12.0}) {
        for (int m : {2, 3, 4}) {
            const auto l = link(FadingModel::rician(0.01), 12, m, 1000, 500, 40, 0.5);
            const double p = db_to_linear(db);
            const auto b = Boundaries::uniform(l.dist, m);
            const auto a = link_metrics(l.dist, b, l.pa, p, l.cfg);
            const auto s = estimate_metrics(l.dist, b, l.pa, p, l.cfg, n, 1000 + m);
            const bool e_ok = within(s.error, a.error_prob, binomial_se(a.error_prob, n));
            const bool d_ok = within(s.delay, a.expected_delay);
            const bool c_ok = within(s.constrained_delay, *a.constrained_delay);
            ok = ok && e_ok && d_ok && c_ok;
            detail += fmt(" [%.0fdB M%.0f delay %.1f vs %.1f", db, m, s.delay.mean, a.expected_delay);
            detail += fmt(" se %.2f err %.3g vs %.3g]", s.delay.std_error, s.error.mean, a.error_prob);
        }
    }
    report(2, ok, "uniform boundaries, 1e6 packets" + detail);
}

void ac3() {
    bool ok = true;
    int points = 0, strict = 0;
    for (const auto& model : {FadingModel::rayleigh(), FadingModel::rician(0.01)}) {
        for (int m : {2, 3}) {
            for (int j = 0; j < 20; ++j) {
                const double db = -20.0 + 1.5 * j;
                const auto l = link(model, 3, m, 1000, 1000, 40, 3.0);
                const LinkEvaluator ev(l, db_to_linear(db));
                const auto r = exhaustive_search(ev, grid_for(m));
                const double tau_std = ev.metrics(Boundaries::standard(m)).expected_delay;
                ++points;
                if (r.boundaries.is_standard()) {
                    ok = ok && r.objective_value == tau_std;
                } else {
                    ok = ok && r.objective_value < tau_std;
                    ++strict;
                }
            }
        }
    }
    report(3, ok, fmt("%.0f points, %.0f strictly better, rest at standard boundaries", points, strict));
}

void ac4() {
    std::mt19937_64 gen(44);
    double worst = 0.0;
    int configs = 0;
    for (const auto& model : {FadingModel::rayleigh(), FadingModel::rician(0.01), FadingModel::rician(2.0)}) {
        for (int m : {2, 3, 4, 5}) {
            for (double db : {-12.0, -4.0, 4.0}) {
                const auto l = link(model, 4, m, 1000, 500, 40, 0.5);
                const double p = db_to_linear(db);
                std::uniform_real_distribution<double> u(0.0, 3.0 * l.dist.mean());
                std::vector<double> e;
                for (int r = 0; r < 5; ++r) {
                    std::vector<double> q(static_cast<std::size_t>(m - 1));
                    for (auto& v : q) v = u(gen);
                    std::sort(q.rbegin(), q.rend());
                    e.push_back(link_metrics(l.dist, Boundaries::from_interior(q), l.pa, p, l.cfg).error_prob);
                }
                const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
                worst = std::max(worst, (*hi - *lo) / *hi);
                ++configs;
            }
        }
    }
    report(4, worst <= 1e-10, fmt("%.0f configurations, max relative spread %.2e", configs, worst));
}

double gk(const std::function<double(double)>& f, double a, double b, std::vector<double> cuts) {
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = std::max(a, cuts[i]), hi = std::min(b, cuts[i + 1]);
        if (hi > lo) s += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 12, 1e-14);
    }
    return s;
}

void ac5() {
    std::mt19937_64 gen(55);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double w3 = 0.0, w4 = 0.0;
    for (int r = 0; r < 100; ++r) {
        const int n_r = 1 + static_cast<int>(u(gen) * 30);
        const int n = 1 + static_cast<int>(u(gen) * 4);
        HarqConfig cfg;
        cfg.m_max = 5;
        cfg.code = CodeSpec{100 + 900 * u(gen), 100 + static_cast<int>(1900 * u(gen)), false};
        const double p_cons = db_to_linear(-15 + 25 * u(gen));
        const auto lc = linearization_constants(n, cfg, PaConfig::ideal(), p_cons);
        double a = 3 * lc.alpha * u(gen), b = 3 * lc.alpha * u(gen);
        if (a > b) std::swap(a, b);
        if (r % 10 == 0) b = kInf;
        const std::vector<double> cuts{lc.c, lc.d};

        const auto g = clt_params(FadingModel::rician(0.01 + 3 * u(gen)), n_r);
        const double top3 = std::min(b, g.mean + 40 * std::sqrt(g.variance));
        const double ref3 = gk([&](double x) { return g.pdf(x) * lc.ramp(x); }, a, std::max(a, top3), cuts);
        w3 = std::max(w3, std::abs(y_lemma3(g, a, b, n, cfg, PaConfig::ideal(), p_cons) - ref3));

        const SumGainDistribution d(FadingModel::rayleigh(0.5 + u(gen)), n_r);
        const double top4 = std::min(b, d.quantile(1 - 1e-16));
        const double ref4 = gk([&](double x) { return d.pdf(x) * lc.ramp(x); }, a, std::max(a, top4), cuts);
        w4 = std::max(w4, std::abs(y_lemma4(d.model(), n_r, a, b, n, cfg, PaConfig::ideal(), p_cons) - ref4));
    }
    report(5, w3 <= 1e-8 && w4 <= 1e-8, fmt("100 inputs, max |lemma3 - quad| %.2e, max |lemma4 - quad| %.2e", w3, w4));
}

void ac6() {
    const auto l = link(FadingModel::rician(0.01), 10, 2, 100000, 100000, 40, 0.0);
    const double p = db_to_linear(5);
    const double fbl = error_prob(l.dist, l.pa, p, l.cfg);
    const double asym = asymptotic_metrics(l.dist, Boundaries::standard(2), l.cfg, l.pa, p).metrics.error_prob;
    const double rel = std::abs(fbl - asym) / asym;

    const auto s = link(FadingModel::rayleigh(), 1, 1, 1000, 1000, 0, 0.0);
    const double out = asymptotic_metrics(s.dist, Boundaries::standard(1), s.cfg, s.pa, std::exp(1.0) - 1).metrics.error_prob;
    const double dev = std::abs(out - (1 - std::exp(-1.0)));
    report(6, rel <= 0.01 && dev <= 1e-10,
           fmt("L=1e5 error %.5e vs asymptotic %.5e (rel %.3f%%); outage deviation %.1e", fbl, asym, 100 * rel, dev));
}

void ac7() {
    double db[3] = {0, 0, 0};
    for (int m : {1, 2}) {
        const auto l = link(FadingModel::rician(0.01), 40, m, 1000, 1000, 40, 0.5);
        auto err = [&](double p) {
            return asymptotic_metrics(l.dist, Boundaries::standard(m), l.cfg, l.pa, p).metrics.error_prob;
        };
        db[m] = linear_to_db(solve_p_cons(err, 1e-3, {}));
    }
    const double gap = db[1] - db[2];
    report(7, std::abs(gap - 4.0) <= 1.0, fmt("M=1 %.3f dB, M=2 %.3f dB, gap %.3f dB", db[1], db[2], gap));
}

void ac8() {
    bool ok = true;
    double prev_c = kInf, prev_g = kInf;
    std::string detail;
    for (int n : {4, 16, 64, 256}) {
        const SumGainDistribution d(FadingModel::rician(0.01), n);
        const auto c = clt_params(d.model(), n);
        const auto g = gamma_params(d.model(), n);
        const double sd = std::sqrt(c.variance);
        double sc = 0.0, sg = 0.0;
        for (int j = -1200; j <= 1200; ++j) {
            const double x = c.mean + j * 0.01 * sd;
            if (x < 0) continue;
            const double f = d.cdf(x);
            sc = std::max(sc, std::abs(c.cdf(x) - f));
            sg = std::max(sg, std::abs(g.cdf(x) - f));
        }
        ok = ok && sc <= prev_c && sg <= prev_g;
        prev_c = sc;
        prev_g = sg;
        detail += fmt(" N%.0f:clt %.2e gamma %.2e", n, sc, sg);
    }
    double worst = 0.0;
    for (int n : {1, 3, 12, 64}) {
        const SumGainDistribution d(FadingModel::rayleigh(), n);
        const auto g = gamma_params(d.model(), n);
        for (double x = 0.05 * n; x < 4.0 * n; x += 0.05 * n) {
            worst = std::max(worst, std::abs(g.cdf(x) - d.cdf(x)) / d.cdf(x));
        }
    }
    ok = ok && worst <= 1e-10;
    report(8, ok, "sup-norm" + detail + fmt("; Rayleigh gamma rel dev %.1e", worst));
}

void ac9() {
    bool ok = true;
    double worst = 0.0;
    for (const auto& model : {FadingModel::rician(0.01), FadingModel::rayleigh()}) {
        for (int m : {2, 3}) {
            for (double db : {-14.0, -8.0, -4.0, 0.0, 4.0}) {
                const auto l = link(model, 5, m, 1000, 1000, 40, 0.5);
                const LinkEvaluator ev(l, db_to_linear(db));
                const auto e = exhaustive_search(ev, grid_for(m));
                const auto q = queen_search(ev, grid_for(m));
                const double rel = (q.objective_value - e.objective_value) / e.objective_value;
                worst = std::max(worst, rel);
            }
        }
    }
    ok = worst <= 0.005;
    const auto l = link(FadingModel::rician(0.01), 5, 3, 1000, 1000, 40, 0.5, PaConfig{0.75, 0.5, db_to_linear(48)});
    std::vector<double> q1;
    for (double db = 10; db <= 40; db += 5) q1.push_back(exhaustive_search(l, db_to_linear(db), grid_for(3)).boundaries[1]);
    const auto hi = exhaustive_search(l, db_to_linear(40), grid_for(3)).boundaries;
    ok = ok && hi[1] == 0.0 && hi[2] == 0.0 && q1.front() > 0.0;
    report(9, ok, fmt("max queen excess %.4f%%; q1 at 10 dB %.3f, at 40 dB %.3g", 100 * worst, q1.front(), q1.back()));
}

void ac10() {
    bool ok = true;
    std::string detail;
    const std::uint64_t n = 1000000;
    double worst_prob = 0.0;
    auto compare = [&](const LinkSpec& l, const Boundaries& b, double p, std::uint64_t seed) {
        const auto u = unnecessary_tx_stats(l.dist, b, l.pa, p, l.cfg);
        const auto s = estimate_metrics(l.dist, b, l.pa, p, l.cfg, n, seed);
        const double bse = binomial_se(u.probability, n);
        ok = ok && within(s.unnecessary_prob, u.probability, bse) &&
             within(s.unnecessary_energy, u.energy, p * bse);
        detail += fmt(" %.3g vs %.3g", s.unnecessary_prob.mean, u.probability);
        return u;
    };
    for (int n_r : {3, 4}) {
        for (double db : {-8.0, -4.0, 0.0, 4.0}) {
            const auto l = link(FadingModel::rician(0.01), n_r, 2, 1000, 500, 40, 0.5);
            const double p = db_to_linear(db);
            const auto b = exhaustive_search(LinkEvaluator(l, p), grid_for(2)).boundaries;
            detail += fmt(" [N%.0f %.0fdB", n_r, db);
            const auto u = compare(l, b, p, 7000 + n_r);
            detail += "]";
            worst_prob = std::max(worst_prob, u.probability);
        }
    }
    ok = ok && worst_prob < 0.05;
    const auto l = link(FadingModel::rician(0.01), 3, 2, 1000, 500, 40, 0.5);
    const std::vector<double> median{l.dist.quantile(0.5)};
    detail += " [median boundary 2dB";
    compare(l, Boundaries::from_interior(median), db_to_linear(2), 7100);
    detail += "]";
    const auto z = unnecessary_tx_stats(l.dist, Boundaries::standard(2), l.pa, 1.0, l.cfg);
    const auto zs = estimate_metrics(l.dist, Boundaries::standard(2), l.pa, 1.0, l.cfg, 100000, 3);
    ok = ok && z.probability == 0.0 && z.energy == 0.0 && zs.unnecessary_prob.mean == 0.0 &&
         zs.unnecessary_energy.mean == 0.0;
    report(10, ok, fmt("max probability at delay-optimal boundaries %.3g;", worst_prob) + detail +
                       " zero at standard");
}

void ac11() {
    const auto l = link(FadingModel::rayleigh(), 1, 2, 1000, 500, 40, 1.0);
    const std::vector<double> q{0.25};
    const auto b = Boundaries::from_interior(q);
    const std::uint64_t n = 1000000;
    bool ok = true;
    double prev = kInf;
    std::string detail;
    for (int n_p : {1, 2, 4, 8, 16}) {
        const auto e = expected_delay_imperfect_csir(l.dist, PilotModel{n_p, 1.0}, b, l.pa, 1.0, l.cfg, n, 3);
        ok = ok && e.mean <= prev;
        prev = e.mean;
        detail += fmt(" np%.0f=%.1f", n_p, e.mean);
    }
    const auto big = expected_delay_imperfect_csir(l.dist, PilotModel{1000, 1.0}, b, l.pa, 1.0, l.cfg, n, 3);
    const double perfect = expected_delay(l.dist, b, l.pa, 1.0, l.cfg);
    ok = ok && std::abs(big.mean - perfect) <= 3 * big.std_error;
    report(11, ok, "delay" + detail + fmt("; np1000=%.2f +- %.2f vs perfect %.2f", big.mean, big.std_error, perfect));
}

}  // namespace

int main() {
    const std::vector<std::function<void()>> checks = {ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10, ac11};
    for (std::size_t i = 0; i < checks.size(); ++i) {
        try {
            checks[i]();
        } catch (const std::exception& e) {
            report(static_cast<int>(i + 1), false, std::string("exception: ") + e.what());
        }
    }
    return failures == 0 ? 0 : 1;
}
