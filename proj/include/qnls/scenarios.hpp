#pragma once

#include <string>
#include <vector>

#include "qnls/config.hpp"
#include "qnls/solver.hpp"

namespace qnls {

struct CheckLine {
    std::string name;
    bool pass;
    std::string detail;
};

struct ScenarioResult {
    std::string name;
    RunConfig config;
    RunOutcome outcome;
    std::vector<CheckLine> checks;

    bool all_pass() const;
};

/// Named verification scenarios with pinned parameters and tolerances:
/// free-gaussian, phase-gauge, virial-identity, pseudo-conformal,
/// blowup-bound, decay-ex41, morawetz-ex43.
const std::vector<std::string>& scenario_names();

bool is_scenario(const std::string& name);

/// Run one scenario and evaluate its checks. Throws std::invalid_argument
/// for an unknown name.
ScenarioResult run_scenario(const std::string& name);

} // namespace qnls
