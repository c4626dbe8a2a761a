#pragma once

namespace fastharq {

/// Parent-code parameters: K nats split into sub-codewords of L channel uses.
struct CodeSpec {
    double big_k = 500.0;  ///< information nats per parent codeword
    int sub_len = 1000;    ///< channel uses per round
    bool third_order = false;

    void validate() const;
    /// R_(n) = K/(nL), the equivalent rate after n rounds.
    double rate(int n) const { return big_k / (static_cast<double>(n) * sub_len); }
};

/// Decoding-error probability after combining n rounds, conditioned on gain g,
/// by the normal approximation. Equals 1 at g = 0.
double round_error_prob(double g, int n, const CodeSpec& code, double p);

/// Gain above which n rounds decode in the infinite-blocklength limit: (e^{K/(nL)} - 1)/p.
double decoding_threshold(int n, const CodeSpec& code, double p);

/// True iff g exceeds decoding_threshold(n, code, p).
bool asymptotic_decodable(double g, int n, const CodeSpec& code, double p);

}  // namespace fastharq
