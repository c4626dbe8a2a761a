#pragma once

#include <functional>
#include <limits>

namespace fastharq {

struct LinkSpec;

/// Power-amplifier efficiency model; all powers are noise-normalized and linear.
struct PaConfig {
    double epsilon = 1.0;  ///< maximum efficiency, (0, 1]
    double theta = 0.0;    ///< class parameter, [0, 1)
    double p_max = std::numeric_limits<double>::infinity();  ///< maximum output power

    static PaConfig ideal() { return {}; }
    void validate() const;
};

/// Radiated power P = (epsilon p_cons / p_max^theta)^{1/(1-theta)}. Not clamped at p_max.
double output_power(const PaConfig& pa, double p_cons);

struct PowerSearch {
    double lo = 1e-6;  ///< initial bracket on p_cons (linear)
    double hi = 1e6;
    int max_expansions = 1;  ///< decades added per side before giving up
};

/// Consumed power at which error(p_cons) == beta. `error` must be decreasing in p_cons.
/// Bisects on log10(p_cons) until |error - beta| < 1e-6 beta or the bracket is below 1e-9 dB.
/// Throws NonBracketed when the bracket ends do not straddle beta.
double solve_p_cons(const std::function<double(double)>& error, double beta,
                    const PowerSearch& search = {});

/// solve_p_cons on the exact error probability of the link, followed by the P <= p_max
/// check; throws Infeasible when the output power limit is violated.
double solve_p_cons_for_beta(const LinkSpec& link, double beta, const PowerSearch& search = {});

/// Conversions at the configuration boundary.
double db_to_linear(double db);
double linear_to_db(double x);

}  // namespace fastharq
