#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fastharq/app/commands.hpp"
#include "fastharq/app/config.hpp"
#include "fastharq/error.hpp"

using namespace fastharq;
using namespace fastharq::app;

namespace {

struct Flags {
    std::string config_path;
    std::string out;
    std::string format;
    std::string boundaries;
    std::uint64_t seed = 0;
    std::uint64_t packets = 0;
    bool third_order = false;
    std::string figure;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--out", f.out, "output path, - for stdout");
    sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", f.seed, "Monte Carlo and optimizer seed");
    sub->add_option("--packets", f.packets, "Monte Carlo packets per point");
    sub->add_flag("--third-order", f.third_order, "include the third-order term");
    sub->add_option("--boundaries", f.boundaries,
                    "standard | uniform | optimized | comma-separated q^1..q^(M-1)");
}

Overrides overrides_from(const Flags& f, const CLI::App& sub) {
    Overrides o;
    if (sub.count("--seed")) o.seed = f.seed;
    if (sub.count("--packets")) o.packets = f.packets;
    o.third_order = f.third_order;
    if (!f.boundaries.empty()) o.boundaries = parse_boundary_flag(f.boundaries);
    if (!f.format.empty()) o.format = f.format == "json" ? OutputFormat::json : OutputFormat::csv;
    if (!f.out.empty()) o.out_path = f.out;
    return o;
}

void write(const Table& t, OutputFormat fmt, const std::string& path) {
    auto emit = [&](std::ostream& os) {
        if (fmt == OutputFormat::json) t.write_json(os);
        else t.write_csv(os);
    };
    if (path.empty() || path == "-") {
        emit(std::cout);
        return;
    }
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open output file " + path);
    emit(os);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fast-HARQ delay, throughput and boundary analysis"};
    app.require_subcommand(1);
    Flags f;
    auto* analyze = app.add_subcommand("analyze", "analytic metrics over a sweep");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo metrics over a sweep");
    auto* optimize = app.add_subcommand("optimize", "optimal boundaries over a sweep");
    auto* figure = app.add_subcommand("figure", "canned configurations for a figure family");
    for (auto* sub : {analyze, simulate, optimize}) {
        sub->add_option("--config", f.config_path, "JSON run configuration")->required();
        add_common(sub, f);
    }
    figure->add_option("name", f.figure, "fig3 ... fig16")->required();
    add_common(figure, f);

    CLI11_PARSE(app, argc, argv);

    try {
        CommandOutput out;
        OutputFormat fmt = OutputFormat::csv;
        std::string path = "-";
        if (figure->parsed()) {
            const Overrides o = overrides_from(f, *figure);
            out = cmd_figure(f.figure, o);
            if (o.format) fmt = *o.format;
            if (o.out_path) path = *o.out_path;
        } else {
            CLI::App* sub = analyze->parsed() ? analyze : simulate->parsed() ? simulate : optimize;
            RunConfig cfg = load_config(f.config_path);
            overrides_from(f, *sub).apply(cfg);
            fmt = cfg.format;
            path = cfg.out_path;
            out = sub == analyze ? cmd_analyze(cfg) : sub == simulate ? cmd_simulate(cfg)
                                                                       : cmd_optimize(cfg);
        }
        write(out.table, fmt, path);
        if (out.rows > 0 && out.infeasible_rows == out.rows) {
            std::cerr << "every point is infeasible\n";
            return 3;
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    }
}
