#include "fastharq/fbl.hpp"

#include <cmath>

#include "fastharq/error.hpp"
#include "fastharq/specfun.hpp"

namespace fastharq {

void CodeSpec::validate() const {
    if (!(big_k > 0.0) || !std::isfinite(big_k)) throw InvalidArgument("CodeSpec: K must be > 0");
    if (sub_len < 1) throw InvalidArgument("CodeSpec: L must be >= 1");
}

double round_error_prob(double g, int n, const CodeSpec& code, double p) {
    if (n < 1) throw InvalidArgument("round_error_prob: n must be >= 1");
    if (!(g >= 0.0)) throw InvalidArgument("round_error_prob: gain must be >= 0");
    const double x = g * p;
    if (!(x > 0.0)) return 1.0;
    const double nl = static_cast<double>(n) * code.sub_len;
    const double capacity = std::log1p(x);
    const double dispersion = x * (2.0 + x) / ((1.0 + x) * (1.0 + x));
    double margin = capacity - code.big_k / nl;
    if (code.third_order) margin += std::log(nl) / (2.0 * nl);
    return specfun::q_function(std::sqrt(nl) * margin / std::sqrt(dispersion));
}

double decoding_threshold(int n, const CodeSpec& code, double p) {
    if (n < 1) throw InvalidArgument("decoding_threshold: n must be >= 1");
    return std::expm1(code.rate(n)) / p;
}

bool asymptotic_decodable(double g, int n, const CodeSpec& code, double p) {
    return g > decoding_threshold(n, code, p);
}

}  // namespace fastharq
