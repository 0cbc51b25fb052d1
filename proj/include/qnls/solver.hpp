#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qnls/diagnostics.hpp"
#include "qnls/grid.hpp"
#include "qnls/model.hpp"

namespace qnls {

/// Time-stepping controls. dt is halved on step rejection and may grow back
/// toward dt0 after a run of accepted steps.
struct StepperConfig {
    double dt0 = 1e-3;
    double dt_min = 1e-6;
    double cn_tol = 1e-10;       // fixed-point tolerance, discrete L2
    int cn_max_iter = 25;
    double blowup_factor = 1e3;  // gradient-growth trigger
    int record_every = 10;       // accepted steps between records
    double step_change_cap = 0.5; // reject when ||du||/||u|| exceeds this
    double morawetz_lambda = 0.5;
    double r_bar = 4.0;

    void validate() const;
};

enum class RunStatus {
    completed,
    blowup_detected,
    step_collapse,
    boundary_contaminated,
};

const char* to_string(RunStatus s);

struct RunOutcome {
    RunStatus status = RunStatus::completed;
    double t_final = 0.0;
    std::vector<DiagnosticsRecord> records;
    std::optional<double> blowup_time_estimate; // present iff blowup_detected
    std::optional<FieldState> final_state;
    long steps_accepted = 0;
    double dt_final = 0.0;
    std::string detail;
};

/// One Crank-Nicolson step of iu_t = Lap u + 2u h'(|u|^2) Lap h(|u|^2) + V u.
/// The quasilinear coefficient is frozen from the midpoint of the current
/// iterate, so every inner solve is a Cayley transform of a real symmetric
/// operator and the weighted discrete mass is preserved to roundoff.
/// Throws std::runtime_error when the fixed point does not converge, an
/// iterate stops being finite, or the step moves the state by more than
/// step_change_cap in relative L2 (callers halve dt on that).
FieldState step(const FieldState& state, const ProblemSpec& spec, double dt,
                const StepperConfig& cfg = {});

/// Advance from t = 0 to spec.t_end with adaptive halving. Blowup is
/// declared only when the gradient integral has grown past
/// blowup_factor x its initial value AND dt has collapsed below dt_min;
/// dt collapse alone is reported as step_collapse.
RunOutcome run(const ProblemSpec& spec, const StepperConfig& cfg);

} // namespace qnls
