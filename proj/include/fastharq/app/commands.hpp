#pragma once

#include <string>

#include "fastharq/app/config.hpp"
#include "fastharq/app/table.hpp"

namespace fastharq::app {

struct CommandOutput {
    Table table;
    int rows = 0;
    int infeasible_rows = 0;
};

/// One row per sweep point with the analytic metrics and, on request, the
/// approximation columns.
CommandOutput cmd_analyze(const RunConfig& config);

/// Monte Carlo columns with standard errors next to the analytic values.
CommandOutput cmd_simulate(const RunConfig& config);

/// Boundary optimization per sweep point, at fixed power or at the power meeting
/// optimize.beta. Infeasible points are flagged, not fatal.
CommandOutput cmd_optimize(const RunConfig& config);

/// Canned configurations for a figure family, merged into one table with a series column.
CommandOutput cmd_figure(const std::string& name, const Overrides& overrides = {});

}  // namespace fastharq::app
