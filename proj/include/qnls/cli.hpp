#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qnls/config.hpp"
#include "qnls/solver.hpp"

namespace qnls {

/// One sweep axis over a supported parameter.
struct SweepAxis {
    std::string name; // alpha | m | beta | amplitude
    double min = 0.0;
    double max = 0.0;
    int count = 1;
};

struct SweepRow {
    std::vector<double> params;
    RunStatus status;
    std::optional<double> fitted_l;
    std::optional<double> blowup_estimate;
    std::optional<double> bound; // J0/(4 y0) when y0 > 0
};

struct SweepResult {
    std::vector<std::string> param_names;
    std::vector<SweepRow> rows;
};

/// Run the cartesian product of one or two axes; independent runs may execute
/// concurrently (QNLS_THREADS caps the fan-out) but rows come back in
/// parameter order.
SweepResult run_sweep(const RunConfig& base, const std::vector<SweepAxis>& axes,
                      int max_threads);

/// Exit statuses: 0 success, 2 usage/config error, 3 runtime failure.
int run_cli(int argc, const char* const* argv);

} // namespace qnls
