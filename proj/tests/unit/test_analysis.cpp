#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fastharq/analysis.hpp"
#include "fastharq/error.hpp"
#include "fastharq/fbl.hpp"
#include "fastharq/specfun.hpp"

using namespace fastharq;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

HarqConfig config(int m, double c, double d, double big_k = 500, int sub_len = 1000) {
    HarqConfig h;
    h.m_max = m;
    h.code = CodeSpec{big_k, sub_len, false};
    h.d_fb = d;
    h.decode_delay.c = c;
    return h;
}

// Boost Gauss-Kronrod over panels split at the Q_n transitions and the bulk of f.
double gk_integral(const std::function<double(double)>& f, double a, double b,
                   std::vector<double> cuts) {
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = std::max(a, cuts[i]);
        const double hi = std::min(b, cuts[i + 1]);
        if (!(hi > lo)) continue;
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 8, 1e-13);
    }
    return total;
}

std::vector<double> cuts_for(const SumGainDistribution& d, const HarqConfig& cfg, double p) {
    std::vector<double> cuts;
    const double sd = std::sqrt(d.variance());
    for (int j = -10; j <= 14; ++j) cuts.push_back(std::max(0.0, d.mean() + j * sd));
    for (int n = 1; n <= cfg.m_max; ++n) {
        const double a = std::expm1(cfg.code.rate(n)) / p;
        for (int j = -40; j <= 40; ++j) cuts.push_back(std::max(0.0, a * (1.0 + j * 0.01)));
    }
    return cuts;
}

// Region integral of f_G Q_n over [lo, hi), truncated where f_G is negligible.
double oracle_theta(const SumGainDistribution& d, const HarqConfig& cfg, double p, double lo,
                    double hi, int n) {
    const double top = std::min(hi, d.quantile(1.0 - 1e-15));
    if (!(top > lo)) return 0.0;
    auto f = [&](double x) {
        return n == 0 ? d.pdf(x) : d.pdf(x) * round_error_prob(x, n, cfg.code, p);
    };
    return gk_integral(f, lo, top, cuts_for(d, cfg, p));
}

// Per-packet delay, recomputed from the protocol description.
double oracle_packet_delay(const HarqConfig& cfg, int m, int i) {
    const double l = cfg.code.sub_len;
    double t = i * l;
    for (int j = m; j <= i; ++j) t += cfg.decode_delay.c * j * l;
    const int fb = i < cfg.m_max ? i - m + 1 : cfg.m_max - m;
    return t + fb * cfg.d_fb;
}

struct Oracle {
    double error, delay, constrained, unnecessary_prob, unnecessary_energy;
};

// Region m, first success at round i >= m: Q_{i-1} - Q_i (Q_{m-1} replaced by 1); failure Q_M.
Oracle oracle(const SumGainDistribution& d, const Boundaries& b, const HarqConfig& cfg, double p,
              double p_cons) {
    const int M = cfg.m_max;
    Oracle o{};
    double success = 0.0, success_delay = 0.0;
    for (int m = 1; m <= M; ++m) {
        const double lo = b[m], hi = b[m - 1];
        std::vector<double> th(static_cast<std::size_t>(M + 1));
        for (int n = 0; n <= M; ++n) th[n] = oracle_theta(d, cfg, p, lo, hi, n);
        for (int i = m; i <= M; ++i) {
            const double pr = (i == m ? th[0] : th[i - 1]) - th[i];
            o.delay += pr * oracle_packet_delay(cfg, m, i);
            success += pr;
            success_delay += pr * oracle_packet_delay(cfg, m, i);
        }
        o.delay += th[M] * oracle_packet_delay(cfg, m, M);
        o.error += th[M];
        if (m >= 2) {
            o.unnecessary_prob += th[0] - th[m - 1];
            for (int i = 1; i < m; ++i) o.unnecessary_energy += (m - i) * p_cons * (th[i - 1] - th[i]);
        }
    }
    o.constrained = success_delay / success;
    return o;
}

SumGainDistribution fig4a() { return SumGainDistribution(FadingModel::rician(0.01), 12); }

}  // namespace

TEST_CASE("region probabilities partition the gain axis") {
    const auto d = fig4a();
    const std::vector<double> q{14.0, 11.0, 9.5};
    const auto b = Boundaries::from_interior(q);
    double sum = 0.0;
    for (int m = 1; m <= 4; ++m) sum += region_prob(d, b, m);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    const std::vector<double> same{3.0, 3.0};
    CHECK(region_prob(d, Boundaries::from_interior(same), 2) == 0.0);
    const auto u = Boundaries::uniform(d, 4);
    for (int m = 1; m <= 4; ++m) CHECK(region_prob(d, u, m) == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("metrics match the independent quadrature oracle") {
    struct Case {
        SumGainDistribution d;
        std::vector<double> q;
        HarqConfig cfg;
        PaConfig pa;
        double p_cons;
    };
    const std::vector<Case> cases = {
        {fig4a(), {12.0}, config(2, 0.5, 40), PaConfig::ideal(), db_to_linear(-10)},
        {fig4a(), {13.0, 10.0}, config(3, 0.5, 40), PaConfig::ideal(), db_to_linear(-12)},
        {SumGainDistribution(FadingModel::rayleigh(), 3), {4.0, 2.5, 1.0}, config(4, 3.0, 40, 1000),
         PaConfig::ideal(), db_to_linear(4)},
        {SumGainDistribution(FadingModel::rician(2.0, 0.8), 5), {6.0, 3.0}, config(3, 1.0, 10, 1000),
         PaConfig{0.75, 0.5, db_to_linear(48)}, 400.0},
        {SumGainDistribution(FadingModel::rayleigh(), 1), {0.25}, config(2, 1.0, 40),
         PaConfig::ideal(), 1.0},
    };
    for (const auto& c : cases) {
        const auto b = Boundaries::from_interior(c.q);
        const double p = output_power(c.pa, c.p_cons);
        const auto o = oracle(c.d, b, c.cfg, p, c.p_cons);
        const auto m = link_metrics(c.d, b, c.pa, c.p_cons, c.cfg);
        const auto u = unnecessary_tx_stats(c.d, b, c.pa, c.p_cons, c.cfg);
        CHECK(m.error_prob == doctest::Approx(o.error).epsilon(1e-7));
        CHECK(m.expected_delay == doctest::Approx(o.delay).epsilon(1e-9));
        REQUIRE(m.constrained_delay.has_value());
        CHECK(*m.constrained_delay == doctest::Approx(o.constrained).epsilon(1e-9));
        CHECK(u.probability == doctest::Approx(o.unnecessary_prob).epsilon(1e-7));
        CHECK(u.energy == doctest::Approx(o.unnecessary_energy).epsilon(1e-7));
        CHECK(m.throughput == doctest::Approx(c.cfg.code.big_k * (1 - o.error) / o.delay).epsilon(1e-9));
        CHECK(expected_delay(c.d, b, c.pa, c.p_cons, c.cfg) == doctest::Approx(m.expected_delay));
    }
}

TEST_CASE("expected delay follows the closed-form sum") {
    const auto d = fig4a();
    const auto cfg = config(3, 0.5, 40);
    const std::vector<double> q{13.0, 10.0};
    const auto b = Boundaries::from_interior(q);
    const double p = db_to_linear(-12);
    const auto t = region_table(d, b, PaConfig::ideal(), p, cfg);
    const double L = 1000, D = 40;
    auto lam = [&](int n) { return 0.5 * n * L; };
    double tau = 0.0;
    for (int m = 1; m <= 3; ++m) tau += t.region(m) * (m * L + lam(m));
    for (int m = 1; m < 3; ++m) {
        for (int i = m + 1; i <= 3; ++i) tau += (L + lam(i)) * t.at(i - 1, m);
        tau += D * t.region(m);
        for (int i = m + 1; i <= 2; ++i) tau += D * t.at(i - 1, m);
    }
    CHECK(expected_delay_from_table(t, cfg) == doctest::Approx(tau).epsilon(1e-12));
}

TEST_CASE("trivial delay and throughput limits") {
    const auto d = fig4a();
    const auto one = config(1, 0.5, 40);
    const auto b1 = Boundaries::standard(1);
    CHECK(expected_delay(d, b1, PaConfig::ideal(), 1.0, one) == doctest::Approx(1500.0));
    CHECK(constrained_delay(d, b1, PaConfig::ideal(), 0.1, one) == doctest::Approx(1500.0));
    CHECK(throughput(500, 0.0, 1500) == doctest::Approx(1.0 / 3.0));
    CHECK(throughput(500, 1.0, 1500) == 0.0);
    CHECK(relative_gain(10, 10) == 0.0);
    CHECK(relative_gain(10, 5) == doctest::Approx(0.5));
    CHECK(lemma6_limit(2, 3.0) == doctest::Approx(3.0 / 11.0));
    CHECK(lemma6_limit(5, 3.0) == doctest::Approx(0.6));
    CHECK(lemma6_limit(1, 3.0) == 0.0);
}

TEST_CASE("low-power limits of the delay") {
    for (int m : {2, 3, 4}) {
        const auto cfg = config(m, 0.5, 40);
        const auto d = fig4a();
        const double p = db_to_linear(-40);
        const double L = 1000;
        const double tau_std = expected_delay(d, Boundaries::standard(m), PaConfig::ideal(), p, cfg);
        CHECK(tau_std == doctest::Approx(m * L + m * (m + 1) * 0.5 * L / 2 + (m - 1) * 40).epsilon(1e-9));
        std::vector<double> top(static_cast<std::size_t>(m - 1), kInf);
        const double tau_fast = expected_delay(d, Boundaries::from_interior(top), PaConfig::ideal(), p, cfg);
        CHECK(tau_fast == doctest::Approx(m * L + 0.5 * m * L).epsilon(1e-9));
    }
}

TEST_CASE("high-power limit of both delays") {
    const auto cfg = config(3, 0.5, 40);
    const auto m = link_metrics(fig4a(), Boundaries::standard(3), PaConfig::ideal(), 1e4, cfg);
    CHECK(m.expected_delay == doctest::Approx(1540.0).epsilon(1e-9));
    CHECK(*m.constrained_delay == doctest::Approx(1540.0).epsilon(1e-9));
    CHECK(m.error_prob < 1e-6);
}

TEST_CASE("error probability does not depend on the boundaries") {
    const auto d = fig4a();
    const auto cfg = config(4, 0.5, 40);
    const double p = db_to_linear(-12);
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    std::vector<double> values;
    for (int r = 0; r < 5; ++r) {
        std::vector<double> q{u(gen), u(gen), u(gen)};
        std::sort(q.rbegin(), q.rend());
        values.push_back(link_metrics(d, Boundaries::from_interior(q), PaConfig::ideal(), p, cfg).error_prob);
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    CHECK((*hi - *lo) / *hi <= 1e-10);
    CHECK(*lo == doctest::Approx(error_prob(d, PaConfig::ideal(), p, cfg)).epsilon(1e-10));
    const auto t = region_table(d, Boundaries::standard(4), PaConfig::ideal(), p, cfg);
    CHECK(t.at(4, 1) == doctest::Approx(error_prob(d, PaConfig::ideal(), p, cfg)).epsilon(1e-10));
    CHECK(y_integral(d, 0.0, kInf, 4, cfg, PaConfig::ideal(), p) ==
          doctest::Approx(t.error_prob).epsilon(1e-9));
    CHECK(y_integral(d, 3.0, 3.0, 2, cfg, PaConfig::ideal(), p) == 0.0);
}

TEST_CASE("undetected-decoding probabilities fall with the round index") {
    const auto d = fig4a();
    const auto cfg = config(4, 0.5, 40);
    const std::vector<double> q{14.0, 12.0, 10.0};
    const auto b = Boundaries::from_interior(q);
    for (double db : {-14.0, -10.0, -6.0}) {
        for (int m = 1; m <= 4; ++m) {
            for (int i = 1; i < 4; ++i) {
                CHECK(theta_im(d, b, PaConfig::ideal(), db_to_linear(db), cfg, i + 1, m) <=
                      theta_im(d, b, PaConfig::ideal(), db_to_linear(db), cfg, i, m) + 1e-15);
            }
        }
    }
    const std::vector<double> same{5.0, 5.0, 5.0};
    CHECK(theta_im(d, Boundaries::from_interior(same), PaConfig::ideal(), 1.0, cfg, 2, 2) == 0.0);
}

TEST_CASE("unnecessary transmissions vanish at standard boundaries") {
    const auto u = unnecessary_tx_stats(fig4a(), Boundaries::standard(3), PaConfig::ideal(), 0.3,
                                        config(3, 0.5, 40));
    CHECK(u.probability == 0.0);
    CHECK(u.energy == 0.0);
    const auto u1 = unnecessary_tx_stats(fig4a(), Boundaries::standard(1), PaConfig::ideal(), 0.3,
                                         config(1, 0.5, 40));
    CHECK(u1.probability == 0.0);
    CHECK(u1.energy == 0.0);
}

TEST_CASE("fast boundaries never lose to standard on a grid") {
    for (double db : {-14.0, -10.0, -4.0, 2.0}) {
        const auto d = SumGainDistribution(FadingModel::rician(0.01), 6);
        const auto cfg = config(2, 3.0, 40, 1000);
        const double p = db_to_linear(db);
        const double tau_std = expected_delay(d, Boundaries::standard(2), PaConfig::ideal(), p, cfg);
        double best = kInf;
        for (int j = 0; j <= 40; ++j) {
            const std::vector<double> q{j * 0.5};
            best = std::min(best, expected_delay(d, Boundaries::from_interior(q), PaConfig::ideal(), p, cfg));
        }
        CHECK(best <= tau_std);
    }
}

TEST_CASE("degenerate success") {
    CHECK_THROWS_AS(constrained_delay(fig4a(), Boundaries::standard(2), PaConfig::ideal(), 1e-8,
                                      config(2, 0.5, 40)),
                    DegenerateSuccess);
}

TEST_CASE("linearization constants") {
    const auto cfg = config(1, 0.5, 0, 1000 * std::log(2.0));
    const auto lc = linearization_constants(1, cfg, PaConfig::ideal(), 1.0);
    CHECK(lc.alpha == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lc.mu == doctest::Approx(std::sqrt(1000.0 / (6 * M_PI))).epsilon(1e-12));
    CHECK(lc.c < lc.alpha);
    CHECK(lc.alpha < lc.d);
    CHECK(lc.ramp(lc.alpha) == doctest::Approx(0.5));
    CHECK(round_error_prob(lc.alpha, 1, cfg.code, 1.0) == doctest::Approx(0.5));
    CHECK(lc.ramp(lc.c - 1) == 1.0);
    CHECK(lc.ramp(lc.d + 1) == 0.0);
    for (int n : {1, 2, 3}) {
        const auto c2 = config(3, 0.5, 0);
        const auto l2 = linearization_constants(n, c2, PaConfig::ideal(), 0.7);
        const double h = 1e-6 * l2.alpha;
        const double fd = (round_error_prob(l2.alpha + h, n, c2.code, 0.7) -
                           round_error_prob(l2.alpha - h, n, c2.code, 0.7)) / (2 * h);
        CHECK(-fd == doctest::Approx(l2.mu).epsilon(1e-4));
    }
}

TEST_CASE("closed-form ramp integrals match quadrature of the ramp") {
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int r = 0; r < 40; ++r) {
        const int n_r = 1 + static_cast<int>(u(gen) * 20);
        const int n = 1 + static_cast<int>(u(gen) * 3);
        const auto cfg = config(3, 0.5, 0, 200 + 800 * u(gen), 100 + static_cast<int>(900 * u(gen)));
        const double p = db_to_linear(-5 + 10 * u(gen));
        const auto lc = linearization_constants(n, cfg, PaConfig::ideal(), p);
        double a = u(gen) * 2 * lc.alpha, b = u(gen) * 2 * lc.alpha;
        if (a > b) std::swap(a, b);
        std::vector<double> cuts{lc.c, lc.d, lc.alpha};

        const auto g = clt_params(FadingModel::rician(0.01), n_r);
        auto gpdf = [&](double x) { return g.pdf(x) * lc.ramp(x); };
        CHECK(y_lemma3(g, a, b, n, cfg, PaConfig::ideal(), p) ==
              doctest::Approx(gk_integral(gpdf, a, b, cuts)).epsilon(1e-8));

        const SumGainDistribution d(FadingModel::rayleigh(1.3), n_r);
        auto rpdf = [&](double x) { return d.pdf(x) * lc.ramp(x); };
        CHECK(y_lemma4(d.model(), n_r, a, b, n, cfg, PaConfig::ideal(), p) ==
              doctest::Approx(gk_integral(rpdf, a, b, cuts)).epsilon(1e-8));
    }
    const auto g = clt_params(FadingModel::rician(0.01), 4);
    CHECK(y_lemma3(g, 2.0, 2.0, 1, config(1, 0, 0), PaConfig::ideal(), 1.0) == 0.0);
    CHECK(y_lemma4(FadingModel::rayleigh(), 4, 2.0, 2.0, 1, config(1, 0, 0), PaConfig::ideal(), 1.0) == 0.0);
    CHECK_THROWS_AS(y_lemma4(FadingModel::rician(0.5), 4, 0.0, 1.0, 1, config(1, 0, 0),
                             PaConfig::ideal(), 1.0),
                    InvalidArgument);
}

TEST_CASE("single-antenna Rayleigh ramp integral by hand") {
    const auto cfg = config(1, 0, 0, 500, 1000);
    const auto lc = linearization_constants(1, cfg, PaConfig::ideal(), 1.0);
    // int e^{-x} over [0, c] plus int e^{-x}(1/2 + alpha mu - mu x) over [c, d].
    const double k0 = 0.5 + lc.alpha * lc.mu;
    const double flat = 1.0 - std::exp(-lc.c);
    const double lin = k0 * (std::exp(-lc.c) - std::exp(-lc.d)) -
                       lc.mu * ((lc.c + 1) * std::exp(-lc.c) - (lc.d + 1) * std::exp(-lc.d));
    CHECK(y_lemma4(FadingModel::rayleigh(), 1, 0.0, kInf, 1, cfg, PaConfig::ideal(), 1.0) ==
          doctest::Approx(flat + lin).epsilon(1e-12));
}

TEST_CASE("tightness of the linearized integrals at the reference settings") {
    const auto cfg = config(2, 0.5, 40);
    const SumGainDistribution ric = fig4a();
    const SumGainDistribution ray(FadingModel::rayleigh(), 12);
    const auto g = clt_params(ric.model(), 12);
    for (double db = -16; db <= 0; db += 2) {
        const double p = db_to_linear(db);
        for (int n : {1, 2}) {
            const double exact = y_integral(ric, 0.0, kInf, n, cfg, PaConfig::ideal(), p);
            const double l3 = y_lemma3(g, 0.0, kInf, n, cfg, PaConfig::ideal(), p);
            CHECK(std::abs(l3 - exact) < 0.05);
            if (exact >= 0.3) CHECK(std::abs(l3 - exact) / exact < 0.1);
            const double ex4 = y_integral(ray, 0.0, kInf, n, cfg, PaConfig::ideal(), p);
            const double l4 = y_lemma4(ray.model(), 12, 0.0, kInf, n, cfg, PaConfig::ideal(), p);
            CHECK(std::abs(l4 - ex4) / ex4 < 0.15);
        }
    }
}

TEST_CASE("asymptotic metrics") {
    const SumGainDistribution d(FadingModel::rayleigh(), 1);
    const auto cfg = config(1, 0, 0, 1000, 1000);
    const auto a = asymptotic_metrics(d, Boundaries::standard(1), cfg, PaConfig::ideal(), std::exp(1.0) - 1);
    CHECK(a.metrics.error_prob == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-10));

    const SumGainDistribution d40(FadingModel::rician(0.01), 40);
    for (double db : {-18.0, -16.0, -14.0}) {
        for (int m : {1, 2}) {
            const auto c = config(m, 0.5, 40, 1000, 1000);
            const auto r = asymptotic_metrics(d40, Boundaries::standard(m), c, PaConfig::ideal(), db_to_linear(db));
            CHECK(std::abs(r.clt_error - r.metrics.error_prob) < 0.05);
        }
    }

    const SumGainDistribution d10(FadingModel::rician(0.01), 10);
    const auto big = config(2, 0.5, 40, 1e5, 100000);
    const double p = db_to_linear(5);
    const double fbl = error_prob(d10, PaConfig::ideal(), p, big);
    const double asym = asymptotic_metrics(d10, Boundaries::standard(2), big, PaConfig::ideal(), p).metrics.error_prob;
    CHECK(std::abs(fbl - asym) / asym < 0.01);
}

TEST_CASE("finite-blocklength throughput approaches the asymptotic value") {
    const SumGainDistribution d(FadingModel::rician(0.01), 10);
    const double p = db_to_linear(5);
    double prev = kInf;
    for (int l : {200, 1000, 5000, 25000}) {
        const auto cfg = config(2, 0.0, 40, l, l);
        const double fin = link_metrics(d, Boundaries::standard(2), PaConfig::ideal(), p, cfg).throughput;
        const double asym = asymptotic_metrics(d, Boundaries::standard(2), cfg, PaConfig::ideal(), p).metrics.throughput;
        const double gap = std::abs(fin - asym) / asym;
        CHECK(gap <= prev);
        prev = gap;
    }
}
