#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fastharq/channel.hpp"
#include "fastharq/error.hpp"
#include "fastharq/harq.hpp"
#include "fastharq/optimize.hpp"
#include "fastharq/power.hpp"

namespace fastharq::app {

/// Configuration problem; `line` is 0 when no source position is known.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0)
        : Error(line > 0 ? "config error at line " + std::to_string(line) + ": " + what
                         : "config error: " + what),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

enum class BoundaryMode { standard, uniform, explicit_list, optimized };
enum class SweepAxis { snr_db, sub_len, n_r, n_p, rate };
enum class OutputFormat { csv, json };
enum class OptimizeMethod { exhaustive, queen, both };

struct FadingSpec {
    bool rician = true;
    double k = 0.01;
    double omega = 1.0;

    FadingModel model() const;
};

struct PaSpec {
    double epsilon = 1.0;
    double theta = 0.0;
    std::optional<double> p_max_db;  ///< absent: no output-power limit

    PaConfig config() const;
};

struct HarqSpec {
    int m_max = 2;
    int sub_len = 1000;
    double big_k = 500.0;
    std::optional<double> rate;  ///< when set, K = rate * L at every point
    double d_fb = 40.0;
    double c = 0.5;
    bool third_order = false;
    bool asymptotic = false;  ///< infinite-blocklength (step) decoding in analyze
};

struct BoundarySpec {
    BoundaryMode mode = BoundaryMode::standard;
    std::vector<double> interior;  ///< explicit_list only
};

struct OptimizeSettings {
    OptimizeMethod method = OptimizeMethod::exhaustive;
    OptimizeSpec spec;
    std::optional<double> beta;  ///< error target; fixed-power optimization when absent
};

struct RunConfig {
    FadingSpec fading;
    int n_r = 1;
    PaSpec pa;
    HarqSpec harq;
    BoundarySpec boundaries;
    SweepAxis axis = SweepAxis::snr_db;
    std::vector<double> sweep;
    double snr_db = 0.0;  ///< power when the sweep axis is not snr_db
    PilotModel pilot;
    std::uint64_t packets = 100000;
    std::uint64_t seed = 1;
    OptimizeSettings optimize;
    bool approximations = false;
    std::string out_path = "-";
    OutputFormat format = OutputFormat::csv;

    /// Throws ConfigError on the first violated constraint.
    void validate() const;
};

/// Command-line flags layered over a configuration.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> packets;
    bool third_order = false;
    std::optional<BoundarySpec> boundaries;
    std::optional<OutputFormat> format;
    std::optional<std::string> out_path;

    /// Applies the flags and re-validates.
    void apply(RunConfig& c) const;
};

/// Parses and validates a JSON document; errors carry the source line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical JSON (sorted keys, two-space indent); parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

/// FNV-1a of the canonical JSON with the seed removed, as 16 hex digits.
std::string config_hash(const RunConfig& c);

const char* to_string(SweepAxis a);
const char* to_string(BoundaryMode m);

/// Parses a --boundaries value: standard | uniform | optimized | comma-separated gains.
BoundarySpec parse_boundary_flag(const std::string& value);

}  // namespace fastharq::app
