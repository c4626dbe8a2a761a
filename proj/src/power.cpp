#include "fastharq/power.hpp"

#include <cmath>

#include "fastharq/analysis.hpp"
#include "fastharq/error.hpp"

namespace fastharq {

void PaConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidArgument("PaConfig: epsilon must be in (0, 1]");
    if (!(theta >= 0.0 && theta < 1.0)) throw InvalidArgument("PaConfig: theta must be in [0, 1)");
    if (!(p_max > 0.0)) throw InvalidArgument("PaConfig: p_max must be > 0");
}

double output_power(const PaConfig& pa, double p_cons) {
    if (!(p_cons >= 0.0)) throw InvalidArgument("output_power: p_cons must be >= 0");
    if (p_cons == 0.0) return 0.0;
    if (pa.theta == 0.0) return pa.epsilon * p_cons;
    return std::pow(pa.epsilon * p_cons / std::pow(pa.p_max, pa.theta), 1.0 / (1.0 - pa.theta));
}

double solve_p_cons(const std::function<double(double)>& error, double beta,
                    const PowerSearch& search) {
    if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("solve_p_cons: beta must be in (0, 1)");
    if (!(search.lo > 0.0 && search.hi > search.lo)) {
        throw InvalidArgument("solve_p_cons: invalid bracket");
    }
    double lo = std::log10(search.lo);
    double hi = std::log10(search.hi);
    double e_lo = error(search.lo);
    double e_hi = error(search.hi);
    for (int i = 0; i < search.max_expansions && e_lo < beta; ++i) {
        lo -= 1.0;
        e_lo = error(std::pow(10.0, lo));
    }
    for (int i = 0; i < search.max_expansions && e_hi > beta; ++i) {
        hi += 1.0;
        e_hi = error(std::pow(10.0, hi));
    }
    if (!(e_lo >= beta && e_hi <= beta)) {
        throw NonBracketed("solve_p_cons: error probability " + std::to_string(e_lo) + " .. " +
                           std::to_string(e_hi) + " over the bracket does not straddle " +
                           std::to_string(beta));
    }
    if (std::abs(e_lo - beta) < 1e-6 * beta) return std::pow(10.0, lo);
    if (std::abs(e_hi - beta) < 1e-6 * beta) return std::pow(10.0, hi);
    // 1e-9 dB expressed in decades.
    constexpr double min_width = 1e-10;
    double mid = 0.5 * (lo + hi);
    while (hi - lo > min_width) {
        mid = 0.5 * (lo + hi);
        const double e = error(std::pow(10.0, mid));
        if (std::abs(e - beta) < 1e-6 * beta) break;
        if (e > beta) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::pow(10.0, mid);
}

double solve_p_cons_for_beta(const LinkSpec& link, double beta, const PowerSearch& search) {
    link.validate();
    const double p_cons = solve_p_cons(
        [&](double pc) { return error_prob(link.dist, link.pa, pc, link.cfg); }, beta, search);
    const double p = output_power(link.pa, p_cons);
    if (p > link.pa.p_max) {
        throw Infeasible("solve_p_cons_for_beta: required output power exceeds p_max", p_cons, p);
    }
    return p_cons;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace fastharq
