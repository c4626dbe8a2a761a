#include "fastharq/app/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fastharq::app {

using nlohmann::json;

namespace {

int line_at(const std::string& text, std::size_t pos) {
    int line = 1;
    for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

// Walks an object tree, remembering where each key sits in the source text.
class Reader {
public:
    explicit Reader(const std::string& text) : text_(text) {}

    int line_of(const std::vector<std::string>& path) const {
        std::size_t pos = 0;
        for (const auto& key : path) {
            if (key.empty() || key[0] == '[') continue;
            const auto at = text_.find("\"" + key + "\"", pos);
            if (at == std::string::npos) break;
            pos = at;
        }
        return pos == 0 && !path.empty() ? 0 : line_at(text_, pos);
    }

    [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& msg) const {
        std::string p;
        for (const auto& k : path) p += (k[0] == '[' ? "" : "/") + k;
        throw ConfigError((p.empty() ? "/" : p) + ": " + msg, line_of(path));
    }

    void check_keys(const json& obj, const std::vector<std::string>& path,
                    const std::set<std::string>& allowed) const {
        if (!obj.is_object()) fail(path, "expected an object");
        for (const auto& [key, value] : obj.items()) {
            if (!allowed.count(key)) {
                auto p = path;
                p.push_back(key);
                fail(p, "unknown key");
            }
        }
    }

    double number(const json& v, const std::vector<std::string>& path) const {
        if (!v.is_number()) fail(path, "expected a number");
        return v.get<double>();
    }

    long long integer(const json& v, const std::vector<std::string>& path) const {
        if (!v.is_number_integer()) fail(path, "expected an integer");
        return v.get<long long>();
    }

    std::uint64_t unsigned_integer(const json& v, const std::vector<std::string>& path) const {
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                       v.get<long long>() < 0)) {
            fail(path, "expected a nonnegative integer");
        }
        return v.get<std::uint64_t>();
    }

    bool boolean(const json& v, const std::vector<std::string>& path) const {
        if (!v.is_boolean()) fail(path, "expected true or false");
        return v.get<bool>();
    }

    std::string string(const json& v, const std::vector<std::string>& path) const {
        if (!v.is_string()) fail(path, "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const json& v, const std::vector<std::string>& path) const {
        if (!v.is_array()) fail(path, "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            auto p = path;
            p.push_back("[" + std::to_string(i) + "]");
            out.push_back(number(v[i], p));
        }
        return out;
    }

private:
    const std::string& text_;
};

using Path = std::vector<std::string>;

Path sub(const Path& p, const std::string& k) {
    auto out = p;
    out.push_back(k);
    return out;
}

SweepAxis axis_from(const std::string& s, const Reader& r, const Path& p) {
    if (s == "snr_db") return SweepAxis::snr_db;
    if (s == "sub_len") return SweepAxis::sub_len;
    if (s == "n_r") return SweepAxis::n_r;
    if (s == "n_p") return SweepAxis::n_p;
    if (s == "rate") return SweepAxis::rate;
    r.fail(p, "unknown sweep axis");
}

void read_fading(const json& j, const Reader& r, const Path& p, FadingSpec& f) {
    r.check_keys(j, p, {"model", "k", "omega"});
    if (j.contains("model")) {
        const auto m = r.string(j["model"], sub(p, "model"));
        if (m == "rician") {
            f.rician = true;
        } else if (m == "rayleigh") {
            f.rician = false;
        } else {
            r.fail(sub(p, "model"), "expected \"rician\" or \"rayleigh\"");
        }
    }
    if (j.contains("k")) f.k = r.number(j["k"], sub(p, "k"));
    if (j.contains("omega")) f.omega = r.number(j["omega"], sub(p, "omega"));
    if (!f.rician && j.contains("k")) r.fail(sub(p, "k"), "k applies to Rician fading only");
    if (!(f.omega > 0.0)) r.fail(sub(p, "omega"), "must be > 0");
    if (!(f.k >= 0.0)) r.fail(sub(p, "k"), "must be >= 0");
}

void read_pa(const json& j, const Reader& r, const Path& p, PaSpec& pa) {
    r.check_keys(j, p, {"epsilon", "theta", "p_max_db"});
    if (j.contains("epsilon")) pa.epsilon = r.number(j["epsilon"], sub(p, "epsilon"));
    if (j.contains("theta")) pa.theta = r.number(j["theta"], sub(p, "theta"));
    if (j.contains("p_max_db")) pa.p_max_db = r.number(j["p_max_db"], sub(p, "p_max_db"));
    if (!(pa.epsilon > 0.0 && pa.epsilon <= 1.0)) r.fail(sub(p, "epsilon"), "must be in (0, 1]");
    if (!(pa.theta >= 0.0 && pa.theta < 1.0)) r.fail(sub(p, "theta"), "must be in [0, 1)");
}

void read_harq(const json& j, const Reader& r, const Path& p, HarqSpec& h) {
    r.check_keys(j, p, {"m_max", "sub_len", "big_k", "rate", "d_fb", "c", "third_order",
                        "asymptotic"});
    if (j.contains("m_max")) h.m_max = static_cast<int>(r.integer(j["m_max"], sub(p, "m_max")));
    if (j.contains("sub_len")) {
        h.sub_len = static_cast<int>(r.integer(j["sub_len"], sub(p, "sub_len")));
    }
    if (j.contains("big_k")) h.big_k = r.number(j["big_k"], sub(p, "big_k"));
    if (j.contains("rate")) h.rate = r.number(j["rate"], sub(p, "rate"));
    if (j.contains("d_fb")) h.d_fb = r.number(j["d_fb"], sub(p, "d_fb"));
    if (j.contains("c")) h.c = r.number(j["c"], sub(p, "c"));
    if (j.contains("third_order")) h.third_order = r.boolean(j["third_order"], sub(p, "third_order"));
    if (j.contains("asymptotic")) h.asymptotic = r.boolean(j["asymptotic"], sub(p, "asymptotic"));
    if (h.m_max < 1 || h.m_max > 8) r.fail(sub(p, "m_max"), "must be in [1, 8]");
    if (h.sub_len < 1) r.fail(sub(p, "sub_len"), "must be >= 1");
    if (!(h.big_k > 0.0)) r.fail(sub(p, "big_k"), "must be > 0");
    if (h.rate && !(*h.rate > 0.0)) r.fail(sub(p, "rate"), "must be > 0");
    if (!(h.d_fb >= 0.0)) r.fail(sub(p, "d_fb"), "must be >= 0");
    if (!(h.c >= 0.0)) r.fail(sub(p, "c"), "must be >= 0");
}

void read_boundaries(const json& j, const Reader& r, const Path& p, BoundarySpec& b) {
    if (j.is_string()) {
        try {
            b = parse_boundary_flag(j.get<std::string>());
        } catch (const ConfigError&) {
            r.fail(p, "expected standard, uniform, optimized or a list of gains");
        }
        if (b.mode == BoundaryMode::explicit_list) {
            r.fail(p, "expected standard, uniform, optimized or a list of gains");
        }
        return;
    }
    b.mode = BoundaryMode::explicit_list;
    b.interior = r.numbers(j, p);
}

void read_sweep(const json& j, const Reader& r, const Path& p, RunConfig& c) {
    if (!j.is_object() || j.size() != 1) r.fail(p, "expected exactly one sweep axis");
    const auto it = j.begin();
    const std::string key = it.key();
    const json& value = it.value();
    c.axis = axis_from(key, r, sub(p, key));
    c.sweep = r.numbers(value, sub(p, key));
    if (c.sweep.empty()) r.fail(sub(p, key), "sweep list is empty");
}

void read_optimize(const json& j, const Reader& r, const Path& p, OptimizeSettings& o) {
    r.check_keys(j, p, {"method", "objective", "grid_points", "population", "iterations",
                        "mutation_scale", "refresh_fraction", "seed", "beta"});
    if (j.contains("method")) {
        const auto m = r.string(j["method"], sub(p, "method"));
        if (m == "exhaustive") {
            o.method = OptimizeMethod::exhaustive;
        } else if (m == "queen") {
            o.method = OptimizeMethod::queen;
        } else if (m == "both") {
            o.method = OptimizeMethod::both;
        } else {
            r.fail(sub(p, "method"), "expected exhaustive, queen or both");
        }
    }
    if (j.contains("objective")) {
        const auto m = r.string(j["objective"], sub(p, "objective"));
        if (m == "delay") {
            o.spec.objective = Objective::delay;
        } else if (m == "throughput") {
            o.spec.objective = Objective::throughput;
        } else {
            r.fail(sub(p, "objective"), "expected delay or throughput");
        }
    }
    auto& s = o.spec;
    if (j.contains("grid_points")) {
        s.grid_points_per_boundary = static_cast<int>(r.integer(j["grid_points"], sub(p, "grid_points")));
    }
    if (j.contains("population")) {
        s.queen_population = static_cast<int>(r.integer(j["population"], sub(p, "population")));
    }
    if (j.contains("iterations")) {
        s.queen_iterations = static_cast<int>(r.integer(j["iterations"], sub(p, "iterations")));
    }
    if (j.contains("mutation_scale")) {
        s.queen_mutation_scale = r.number(j["mutation_scale"], sub(p, "mutation_scale"));
    }
    if (j.contains("refresh_fraction")) {
        s.queen_refresh_fraction = r.number(j["refresh_fraction"], sub(p, "refresh_fraction"));
    }
    if (j.contains("seed")) s.seed = r.unsigned_integer(j["seed"], sub(p, "seed"));
    if (j.contains("beta")) o.beta = r.number(j["beta"], sub(p, "beta"));
    if (s.grid_points_per_boundary < 2) r.fail(sub(p, "grid_points"), "must be >= 2");
    if (s.queen_population < 4) r.fail(sub(p, "population"), "must be >= 4");
    if (s.queen_iterations < 0) r.fail(sub(p, "iterations"), "must be >= 0");
    if (!(s.queen_mutation_scale > 0.0 && s.queen_mutation_scale < 1.0)) {
        r.fail(sub(p, "mutation_scale"), "must be in (0, 1)");
    }
    if (!(s.queen_refresh_fraction >= 0.0 && s.queen_refresh_fraction <= 1.0)) {
        r.fail(sub(p, "refresh_fraction"), "must be in [0, 1]");
    }
    if (o.beta && !(*o.beta > 0.0 && *o.beta < 1.0)) r.fail(sub(p, "beta"), "must be in (0, 1)");
}

json to_json(const RunConfig& c) {
    json j;
    j["fading"] = c.fading.rician
                      ? json{{"model", "rician"}, {"k", c.fading.k}, {"omega", c.fading.omega}}
                      : json{{"model", "rayleigh"}, {"omega", c.fading.omega}};
    j["n_r"] = c.n_r;
    j["pa"] = json{{"epsilon", c.pa.epsilon}, {"theta", c.pa.theta}};
    if (c.pa.p_max_db) j["pa"]["p_max_db"] = *c.pa.p_max_db;
    j["harq"] = json{{"m_max", c.harq.m_max},   {"sub_len", c.harq.sub_len},
                     {"big_k", c.harq.big_k},   {"d_fb", c.harq.d_fb},
                     {"c", c.harq.c},           {"third_order", c.harq.third_order},
                     {"asymptotic", c.harq.asymptotic}};
    if (c.harq.rate) j["harq"]["rate"] = *c.harq.rate;
    if (c.boundaries.mode == BoundaryMode::explicit_list) {
        j["boundaries"] = c.boundaries.interior;
    } else {
        j["boundaries"] = to_string(c.boundaries.mode);
    }
    j["sweep"] = json{{to_string(c.axis), c.sweep}};
    j["snr_db"] = c.snr_db;
    j["pilot"] = json{{"n_p", c.pilot.n_p}, {"p_pilot", c.pilot.p_pilot}};
    j["mc"] = json{{"packets", c.packets}, {"seed", c.seed}};
    const auto& o = c.optimize;
    const char* method = o.method == OptimizeMethod::exhaustive ? "exhaustive"
                         : o.method == OptimizeMethod::queen    ? "queen"
                                                                : "both";
    j["optimize"] = json{{"method", method},
                         {"objective", o.spec.objective == Objective::delay ? "delay" : "throughput"},
                         {"grid_points", o.spec.grid_points_per_boundary},
                         {"population", o.spec.queen_population},
                         {"iterations", o.spec.queen_iterations},
                         {"mutation_scale", o.spec.queen_mutation_scale},
                         {"refresh_fraction", o.spec.queen_refresh_fraction},
                         {"seed", o.spec.seed}};
    if (o.beta) j["optimize"]["beta"] = *o.beta;
    j["approximations"] = c.approximations;
    j["output"] = json{{"path", c.out_path}, {"format", c.format == OutputFormat::csv ? "csv" : "json"}};
    return j;
}

}  // namespace

FadingModel FadingSpec::model() const {
    return rician ? FadingModel::rician(k, omega) : FadingModel::rayleigh(omega);
}

PaConfig PaSpec::config() const {
    PaConfig pa;
    pa.epsilon = epsilon;
    pa.theta = theta;
    if (p_max_db) pa.p_max = db_to_linear(*p_max_db);
    return pa;
}

const char* to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::snr_db: return "snr_db";
        case SweepAxis::sub_len: return "sub_len";
        case SweepAxis::n_r: return "n_r";
        case SweepAxis::n_p: return "n_p";
        case SweepAxis::rate: return "rate";
    }
    return "?";
}

const char* to_string(BoundaryMode m) {
    switch (m) {
        case BoundaryMode::standard: return "standard";
        case BoundaryMode::uniform: return "uniform";
        case BoundaryMode::explicit_list: return "explicit";
        case BoundaryMode::optimized: return "optimized";
    }
    return "?";
}

BoundarySpec parse_boundary_flag(const std::string& value) {
    BoundarySpec b;
    if (value == "standard") return b;
    if (value == "uniform") {
        b.mode = BoundaryMode::uniform;
        return b;
    }
    if (value == "optimized") {
        b.mode = BoundaryMode::optimized;
        return b;
    }
    b.mode = BoundaryMode::explicit_list;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = item == "inf" ? INFINITY : std::stod(item, &used);
            if (item != "inf" && used != item.size()) throw std::invalid_argument(item);
            b.interior.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("--boundaries: cannot parse '" + item + "'");
        }
    }
    if (b.interior.empty()) throw ConfigError("--boundaries: empty list");
    return b;
}

void RunConfig::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (n_r < 1) fail("/n_r: must be >= 1");
    if (sweep.empty()) fail("/sweep: sweep list is empty");
    for (double v : sweep) {
        if (!std::isfinite(v)) fail("/sweep: values must be finite");
        if (axis == SweepAxis::sub_len || axis == SweepAxis::n_r || axis == SweepAxis::n_p) {
            if (v < 1 || v != std::floor(v)) fail("/sweep: values must be positive integers");
        }
        if (axis == SweepAxis::rate && !(v > 0.0)) fail("/sweep: rates must be > 0");
    }
    if (packets < 1) fail("/mc/packets: must be >= 1");
    if (pilot.n_p < 1) fail("/pilot/n_p: must be >= 1");
    if (!(pilot.p_pilot > 0.0)) fail("/pilot/p_pilot: must be > 0");
    if (boundaries.mode == BoundaryMode::explicit_list) {
        if (static_cast<int>(boundaries.interior.size()) != harq.m_max - 1) {
            fail("/boundaries: expected " + std::to_string(harq.m_max - 1) + " interior thresholds");
        }
        for (std::size_t i = 0; i < boundaries.interior.size(); ++i) {
            if (!(boundaries.interior[i] >= 0.0)) fail("/boundaries: thresholds must be >= 0");
            if (i > 0 && boundaries.interior[i] > boundaries.interior[i - 1]) {
                fail("/boundaries: thresholds must be nonincreasing");
            }
        }
    }
    try {
        fading.model();
        pa.config().validate();
        optimize.spec.validate();
    } catch (const InvalidArgument& e) {
        fail(e.what());
    }
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what(),
                          line_at(text, e.byte > 0 ? e.byte - 1 : 0));
    }
    const Reader r(text);
    const Path root;
    r.check_keys(j, root,
                 {"fading", "n_r", "pa", "harq", "boundaries", "sweep", "snr_db", "pilot", "mc",
                  "optimize", "approximations", "output"});
    RunConfig c;
    if (j.contains("fading")) read_fading(j["fading"], r, {"fading"}, c.fading);
    if (j.contains("n_r")) c.n_r = static_cast<int>(r.integer(j["n_r"], {"n_r"}));
    if (c.n_r < 1) r.fail({"n_r"}, "must be >= 1");
    if (j.contains("pa")) read_pa(j["pa"], r, {"pa"}, c.pa);
    if (j.contains("harq")) read_harq(j["harq"], r, {"harq"}, c.harq);
    if (j.contains("boundaries")) read_boundaries(j["boundaries"], r, {"boundaries"}, c.boundaries);
    if (!j.contains("sweep")) r.fail({}, "missing sweep");
    read_sweep(j["sweep"], r, {"sweep"}, c);
    if (j.contains("snr_db")) c.snr_db = r.number(j["snr_db"], {"snr_db"});
    if (j.contains("pilot")) {
        const Path p{"pilot"};
        r.check_keys(j["pilot"], p, {"n_p", "p_pilot"});
        if (j["pilot"].contains("n_p")) {
            c.pilot.n_p = static_cast<int>(r.integer(j["pilot"]["n_p"], sub(p, "n_p")));
        }
        if (j["pilot"].contains("p_pilot")) {
            c.pilot.p_pilot = r.number(j["pilot"]["p_pilot"], sub(p, "p_pilot"));
        }
        if (c.pilot.n_p < 1) r.fail(sub(p, "n_p"), "must be >= 1");
        if (!(c.pilot.p_pilot > 0.0)) r.fail(sub(p, "p_pilot"), "must be > 0");
    }
    if (j.contains("mc")) {
        const Path p{"mc"};
        r.check_keys(j["mc"], p, {"packets", "seed"});
        if (j["mc"].contains("packets")) c.packets = r.unsigned_integer(j["mc"]["packets"], sub(p, "packets"));
        if (j["mc"].contains("seed")) c.seed = r.unsigned_integer(j["mc"]["seed"], sub(p, "seed"));
        if (c.packets < 1) r.fail(sub(p, "packets"), "must be >= 1");
    }
    if (j.contains("optimize")) read_optimize(j["optimize"], r, {"optimize"}, c.optimize);
    if (j.contains("approximations")) c.approximations = r.boolean(j["approximations"], {"approximations"});
    if (j.contains("output")) {
        const Path p{"output"};
        r.check_keys(j["output"], p, {"path", "format"});
        if (j["output"].contains("path")) c.out_path = r.string(j["output"]["path"], sub(p, "path"));
        if (j["output"].contains("format")) {
            const auto f = r.string(j["output"]["format"], sub(p, "format"));
            if (f == "csv") {
                c.format = OutputFormat::csv;
            } else if (f == "json") {
                c.format = OutputFormat::json;
            } else {
                r.fail(sub(p, "format"), "expected csv or json");
            }
        }
    }
    try {
        c.validate();
    } catch (const ConfigError& e) {
        // Re-anchor the message on the offending key when it names one.
        const std::string what = e.what();
        const auto slash = what.find('/');
        if (slash != std::string::npos) {
            Path p;
            std::stringstream ss(what.substr(slash + 1, what.find(':', slash) - slash - 1));
            std::string k;
            while (std::getline(ss, k, '/')) p.push_back(k);
            throw ConfigError(what.substr(slash), r.line_of(p));
        }
        throw;
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void Overrides::apply(RunConfig& c) const {
    if (seed) c.seed = *seed;
    if (packets) c.packets = *packets;
    if (third_order) c.harq.third_order = true;
    if (boundaries) c.boundaries = *boundaries;
    if (format) c.format = *format;
    if (out_path) c.out_path = *out_path;
    c.validate();
}

std::string serialize_config(const RunConfig& c) { return to_json(c).dump(2) + "\n"; }

std::string config_hash(const RunConfig& c) {
    json j = to_json(c);
    j["mc"].erase("seed");
    j["optimize"].erase("seed");
    const std::string s = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace fastharq::app
