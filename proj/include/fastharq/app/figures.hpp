#pragma once

#include <string>
#include <vector>

#include "fastharq/app/config.hpp"

namespace fastharq::app {

struct FigureSeries {
    enum class Kind { analyze, simulate, optimize };
    std::string label;
    Kind kind = Kind::analyze;
    RunConfig config;
};

/// Canned series for fig3 ... fig16. Throws InvalidArgument for an unknown name.
std::vector<FigureSeries> figure_series(const std::string& name);

std::vector<std::string> figure_names();

}  // namespace fastharq::app
