#include "qnls/scenarios.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qnls/analytic.hpp"
#include "qnls/criteria.hpp"
#include "qnls/diagnostics.hpp"

namespace qnls {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

CheckLine check_le(const std::string& name, double value, double bound) {
    return {name, value <= bound, fmt(value) + " <= " + fmt(bound)};
}

// relative drift of mass^2 and energy across a record series
void conservation_checks(const std::vector<DiagnosticsRecord>& recs,
                         std::vector<CheckLine>& out) {
    double dm = 0.0, de = 0.0;
    const double m0 = recs.front().mass2;
    const double e0 = recs.front().energy;
    for (const auto& r : recs) {
        dm = std::max(dm, std::abs(r.mass2 - m0) / std::max(std::abs(m0), 1e-300));
        de = std::max(de, std::abs(r.energy - e0) / std::max(std::abs(e0), 1e-300));
    }
    out.push_back(check_le("mass drift", dm, 1e-6));
    out.push_back(check_le("energy drift", de, 1e-4));
}

double l2_distance(const FieldState& a, const std::vector<complexd>& b) {
    double acc = 0.0;
    for (int j = 0; j < a.grid.size(); ++j)
        acc += std::norm(a.values[j] - b[j]) * a.grid.weight(j);
    return std::sqrt(acc);
}

RunConfig base_config() {
    RunConfig cfg;
    cfg.problem.dim = 3;
    cfg.problem.V.epsilon = 1e-3;
    return cfg;
}

RunConfig free_gaussian_config() {
    RunConfig cfg = base_config();
    cfg.problem.radius = 16.0;
    cfg.problem.grid_points = 1024;
    cfg.problem.dt0 = 1e-3;
    cfg.problem.t_end = 1.0;
    cfg.stepper.dt0 = 1e-3;
    cfg.stepper.dt_min = 1e-6;
    return cfg;
}

RunConfig phase_gauge_config(double v_const) {
    RunConfig cfg = base_config();
    cfg.problem.radius = 16.0;
    cfg.problem.grid_points = 1024;
    cfg.problem.dt0 = 1e-4;
    cfg.problem.t_end = 0.1;
    cfg.problem.V.v_bounded = v_const;
    cfg.stepper.dt0 = 1e-4;
    cfg.stepper.dt_min = 1e-7;
    return cfg;
}

// smooth quasilinear run: h = s^{1/2}, V = -r^{-1}
RunConfig quasilinear_config() {
    RunConfig cfg = base_config();
    cfg.problem.h = NonlinearitySpec({{1.0, 0.5}});
    cfg.problem.V = {1.0, 1.0, -1, 0.0, 1e-3};
    cfg.problem.radius = 16.0;
    cfg.problem.grid_points = 2048;
    cfg.problem.dt0 = 5e-4;
    cfg.problem.t_end = 0.5;
    cfg.stepper.dt0 = 5e-4;
    cfg.stepper.dt_min = 1e-7;
    cfg.stepper.record_every = 10;
    return cfg;
}

RunConfig blowup_bound_config() {
    RunConfig cfg = base_config();
    cfg.problem.V = {1.0, 2.0, +1, 0.0, 1e-3};
    cfg.problem.u0 = {1.0, 1.0, 0.25, {}};
    cfg.problem.radius = 12.0;
    cfg.problem.grid_points = 4096;
    cfg.problem.dt0 = 5e-4;
    cfg.problem.t_end = 1.0;
    cfg.stepper.dt0 = 5e-4;
    cfg.stepper.dt_min = 1e-5;
    cfg.stepper.record_every = 10;
    return cfg;
}

// h = s^{1/2} with the attractive-sign barrier -r^{-2}: spreading solution
// whose gradient terms decay like 1/t^2
RunConfig decay_ex41_config() {
    RunConfig cfg = base_config();
    cfg.problem.h = NonlinearitySpec({{1.0, 0.5}});
    cfg.problem.V = {1.0, 2.0, -1, 0.0, 1e-3};
    cfg.problem.radius = 480.0;
    cfg.problem.grid_points = 24000;
    cfg.problem.dt0 = 4e-3;
    cfg.problem.t_end = 40.0;
    cfg.stepper.dt0 = 4e-3;
    cfg.stepper.dt_min = 1e-6;
    cfg.stepper.record_every = 25;
    return cfg;
}

// two-power nonlinearity variant for the mixed-norm bound
RunConfig morawetz_ex43_config() {
    RunConfig cfg = base_config();
    cfg.problem.h = NonlinearitySpec({{1.0, 0.75}, {1.0, 1.0}});
    cfg.problem.V = {1.0, 2.0, -1, 0.0, 1e-3};
    cfg.problem.radius = 240.0;
    cfg.problem.grid_points = 12000;
    cfg.problem.dt0 = 2e-3;
    cfg.problem.t_end = 20.0;
    cfg.stepper.dt0 = 2e-3;
    cfg.stepper.dt_min = 1e-6;
    cfg.stepper.record_every = 25;
    return cfg;
}

ScenarioResult run_free_gaussian() {
    ScenarioResult res;
    res.name = "free-gaussian";
    res.config = free_gaussian_config();
    res.outcome = run(res.config.problem, res.config.stepper);
    const auto& out = res.outcome;
    res.checks.push_back({"status completed",
                          out.status == RunStatus::completed, to_string(out.status)});
    const auto& fs = *out.final_state;
    std::vector<complexd> exact(fs.grid.size());
    for (int j = 0; j < fs.grid.size(); ++j)
        exact[j] = free_gaussian(1.0, 1.0, 0.0, 3, fs.grid.node(j), fs.t);
    res.checks.push_back(
        check_le("free evolution L2 error", l2_distance(fs, exact), 1e-3));
    conservation_checks(out.records, res.checks);
    return res;
}

ScenarioResult run_phase_gauge() {
    ScenarioResult res;
    res.name = "phase-gauge";
    const double v_const = 5.0;
    res.config = phase_gauge_config(v_const);
    res.outcome = run(res.config.problem, res.config.stepper);
    RunConfig free_cfg = phase_gauge_config(0.0);
    const RunOutcome free_out = run(free_cfg.problem, free_cfg.stepper);

    const auto& fs = *res.outcome.final_state;
    const auto& gs = *free_out.final_state;
    std::vector<complexd> gauge(gs.values.size());
    const complexd phase = std::exp(complexd(0.0, -v_const * gs.t));
    for (std::size_t j = 0; j < gauge.size(); ++j) gauge[j] = phase * gs.values[j];
    const double mass0 = std::sqrt(res.outcome.records.front().mass2);
    res.checks.push_back({"status completed",
                          res.outcome.status == RunStatus::completed,
                          to_string(res.outcome.status)});
    res.checks.push_back(check_le("gauge identity relative L2",
                                  l2_distance(fs, gauge) / mass0, 1e-6));
    conservation_checks(res.outcome.records, res.checks);
    return res;
}

ScenarioResult run_virial_identity() {
    ScenarioResult res;
    res.name = "virial-identity";
    res.config = quasilinear_config();
    res.outcome = run(res.config.problem, res.config.stepper);
    const auto& recs = res.outcome.records;
    res.checks.push_back({"status completed",
                          res.outcome.status == RunStatus::completed,
                          to_string(res.outcome.status)});
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < recs.size(); ++k) {
        const double dJdt =
            (recs[k + 1].J - recs[k - 1].J) / (recs[k + 1].t - recs[k - 1].t);
        worst = std::max(worst, std::abs(dJdt + 4.0 * recs[k].y) /
                                    (1.0 + std::abs(recs[k].y)));
    }
    res.checks.push_back(check_le("virial identity |dJ/dt + 4y|/(1+|y|)", worst, 1e-2));
    conservation_checks(recs, res.checks);
    return res;
}

ScenarioResult run_pseudo_conformal() {
    ScenarioResult res;
    res.name = "pseudo-conformal";
    res.config = quasilinear_config();
    res.outcome = run(res.config.problem, res.config.stepper);
    const auto& recs = res.outcome.records;
    res.checks.push_back({"status completed",
                          res.outcome.status == RunStatus::completed,
                          to_string(res.outcome.status)});
    double worst = 0.0;
    for (const auto& r : recs)
        worst = std::max(worst, std::abs(r.P_residual) / (1.0 + std::abs(r.P)));
    res.checks.push_back(
        check_le("pseudo-conformal residual |P - J(0) - 4 int tau theta|", worst, 1e-2));
    conservation_checks(recs, res.checks);
    return res;
}

ScenarioResult run_blowup_bound() {
    ScenarioResult res;
    res.name = "blowup-bound";
    res.config = blowup_bound_config();
    res.outcome = run(res.config.problem, res.config.stepper);
    const auto& out = res.outcome;
    res.checks.push_back({"status blowup_detected",
                          out.status == RunStatus::blowup_detected,
                          std::string(to_string(out.status)) + " (" + out.detail + ")"});
    const auto& r0 = out.records.front();
    res.checks.push_back({"hypotheses E(u0) < 0 and y(0) > 0",
                          r0.energy < 0.0 && r0.y > 0.0,
                          "E0 = " + fmt(r0.energy) + ", y0 = " + fmt(r0.y)});
    const double bound = blowup_time_bound(r0.J, r0.y);
    if (out.blowup_time_estimate) {
        res.checks.push_back(check_le("t_est <= 1.2 J(0)/(4 y(0))",
                                      *out.blowup_time_estimate, 1.2 * bound));
    } else {
        res.checks.push_back({"t_est <= 1.2 J(0)/(4 y(0))", false, "no estimate"});
    }
    // chirped-Gaussian family: y(0) = 2 beta J(0), so the bound is 1/(8 beta)
    const double beta = res.config.problem.u0.chirp;
    const double analytic = 1.0 / (8.0 * beta);
    const double identity =
        std::abs(blowup_time_bound(r0.J, 2.0 * beta * r0.J) - analytic) / analytic;
    res.checks.push_back(check_le("analytic bound identity 1/(8 beta)", identity, 1e-6));
    return res;
}

ScenarioResult run_decay_ex41() {
    ScenarioResult res;
    res.name = "decay-ex41";
    res.config = decay_ex41_config();
    res.outcome = run(res.config.problem, res.config.stepper);
    const auto& recs = res.outcome.records;
    res.checks.push_back({"status completed",
                          res.outcome.status == RunStatus::completed,
                          std::string(to_string(res.outcome.status)) +
                              " t_final=" + fmt(res.outcome.t_final)});

    std::vector<DiagnosticsRecord> window;
    for (const auto& r : recs)
        if (r.t <= 20.0) window.push_back(r);
    const auto fit = fit_decay(
        window, [](const DiagnosticsRecord& r) { return r.grad_h2 + r.abs_pot; },
        1.0);
    res.checks.push_back({"decay exponent l >= 1.5 (predicted 2)",
                          fit.l >= 1.5, "l = " + fmt(fit.l) + ", C = " + fmt(fit.C)});

    bool monotone = true;
    for (std::size_t k = 1; k < recs.size(); ++k)
        if (recs[k].morawetz_power < recs[k - 1].morawetz_power - 1e-12)
            monotone = false;
    res.checks.push_back({"Morawetz accumulator nondecreasing", monotone, ""});

    double at20 = 0.0, at40 = 0.0;
    for (const auto& r : recs) {
        if (r.t <= 20.0) at20 = r.morawetz_power;
        at40 = r.morawetz_power;
    }
    res.checks.push_back(check_le("Morawetz tail increment over [20,40]",
                                  (at40 - at20) / at20, 0.05));
    conservation_checks(recs, res.checks);
    return res;
}

ScenarioResult run_morawetz_ex43() {
    ScenarioResult res;
    res.name = "morawetz-ex43";
    res.config = morawetz_ex43_config();
    res.outcome = run(res.config.problem, res.config.stepper);
    const auto& recs = res.outcome.records;
    res.checks.push_back({"status completed",
                          res.outcome.status == RunStatus::completed,
                          to_string(res.outcome.status)});

    bool monotone = true;
    for (std::size_t k = 1; k < recs.size(); ++k)
        if (recs[k].morawetz_power < recs[k - 1].morawetz_power - 1e-12 ||
            recs[k].morawetz_const < recs[k - 1].morawetz_const - 1e-12)
            monotone = false;
    res.checks.push_back({"Morawetz accumulators nondecreasing", monotone, ""});

    // late-time increments must have slowed down
    double mid = 0.0;
    for (const auto& r : recs)
        if (r.t <= 10.0) mid = r.morawetz_power;
    const double tail = recs.back().morawetz_power - mid;
    res.checks.push_back(
        check_le("Morawetz tail increment over [10,20]", tail / mid, 0.10));

    SpacetimeNormSpec sn;
    sn.q_bar = 4.0;
    sn.r_bar = 4.0;
    const double st_norm = spacetime_norm(recs, sn);
    res.checks.push_back({"spacetime norm finite", std::isfinite(st_norm),
                          "||u|| = " + fmt(st_norm)});

    // exponent admissibility with m_i = alpha_i 2*/r_bar and l = 2
    const double ts = 6.0;
    const double m1 = 0.75 * ts / sn.r_bar;
    const double m2 = 1.0 * ts / sn.r_bar;
    const bool ok = spacetime_exponent_check(1.4, sn.q_bar, sn.r_bar, m1, m2, 2.0, 3);
    res.checks.push_back({"spacetime exponent condition at q = 1.4", ok,
                          "m1 = " + fmt(m1) + ", m2 = " + fmt(m2)});
    conservation_checks(recs, res.checks);
    return res;
}

} // namespace

bool ScenarioResult::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {
        "free-gaussian",    "phase-gauge",  "virial-identity",
        "pseudo-conformal", "blowup-bound", "decay-ex41",
        "morawetz-ex43"};
    return names;
}

bool is_scenario(const std::string& name) {
    for (const auto& n : scenario_names())
        if (n == name) return true;
    return false;
}

ScenarioResult run_scenario(const std::string& name) {
    if (name == "free-gaussian") return run_free_gaussian();
    if (name == "phase-gauge") return run_phase_gauge();
    if (name == "virial-identity") return run_virial_identity();
    if (name == "pseudo-conformal") return run_pseudo_conformal();
    if (name == "blowup-bound") return run_blowup_bound();
    if (name == "decay-ex41") return run_decay_ex41();
    if (name == "morawetz-ex43") return run_morawetz_ex43();
    throw std::invalid_argument("unknown scenario: " + name);
}

} // namespace qnls
