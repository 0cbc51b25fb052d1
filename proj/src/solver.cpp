#include "qnls/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qnls/tridiag.hpp"

namespace qnls {

void StepperConfig::validate() const {
    if (!(dt_min < dt0))
        throw std::invalid_argument("stepper: dt_min must be < dt0");
    if (!(cn_tol > 0.0)) throw std::invalid_argument("stepper: cn_tol must be > 0");
    if (cn_max_iter < 1)
        throw std::invalid_argument("stepper: cn_max_iter must be >= 1");
    if (!(blowup_factor > 1.0))
        throw std::invalid_argument("stepper: blowup_factor must be > 1");
    if (record_every < 1)
        throw std::invalid_argument("stepper: record_every must be >= 1");
    if (!(step_change_cap > 0.0))
        throw std::invalid_argument("stepper: step_change_cap must be > 0");
}

const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::completed: return "completed";
        case RunStatus::blowup_detected: return "blowup_detected";
        case RunStatus::step_collapse: return "step_collapse";
        case RunStatus::boundary_contaminated: return "boundary_contaminated";
    }
    return "unknown";
}

namespace {

// Per-run scratch: static tables for the grid plus reusable buffers.
struct Stepper {
    const ProblemSpec& spec;
    const StepperConfig& cfg;
    LaplacianStencil lap;
    std::vector<double> pot;
    // buffers
    std::vector<double> s_mid, h_mid, coef;
    std::vector<complexd> lower, diag, upper, rhs, mid, next;

    Stepper(const ProblemSpec& sp, const RadialGrid& grid, const StepperConfig& c)
        : spec(sp), cfg(c), lap(make_laplacian(grid)) {
        pot.resize(grid.size());
        for (int j = 0; j < grid.size(); ++j)
            pot[j] = eval_V(sp.V, grid.node(j)).V;
        const std::size_t M = grid.size();
        s_mid.resize(M);
        h_mid.resize(M);
        coef.resize(M);
        lower.resize(M);
        diag.resize(M);
        upper.resize(M);
        rhs.resize(M);
        mid.resize(M);
        next.resize(M);
    }

    static double norm2(const std::vector<complexd>& u, const RadialGrid& g) {
        double acc = 0.0;
        for (int j = 0; j < g.size(); ++j) acc += std::norm(u[j]) * g.weight(j);
        return std::sqrt(acc);
    }

    // Solve (I + i dt/2 H) u1 = (I - i dt/2 H) u0 with H = Lap + V + D and
    // the real diagonal D frozen at the supplied midpoint iterate. H is
    // symmetric under the quadrature weights, so this map is an isometry of
    // the discrete L2 norm regardless of how well the fixed point has
    // converged.
    void cayley_solve(const std::vector<complexd>& u0, double dt,
                      const std::vector<complexd>& mid_iterate,
                      std::vector<complexd>& out) {
        const std::size_t M = u0.size();
        const bool quasi = !spec.h.is_zero();
        if (quasi) {
            for (std::size_t j = 0; j < M; ++j) s_mid[j] = std::norm(mid_iterate[j]);
            for (std::size_t j = 0; j < M; ++j)
                h_mid[j] = eval_h(spec.h, s_mid[j]).h;
            // coef = 2 h'(s) (Lap h)(s), the quasilinear diagonal
            for (std::size_t j = 0; j < M; ++j) {
                double lh = lap.diag[j] * h_mid[j];
                if (j > 0) lh += lap.lower[j] * h_mid[j - 1];
                if (j + 1 < M) lh += lap.upper[j] * h_mid[j + 1];
                coef[j] = 2.0 * eval_h(spec.h, s_mid[j]).hp * lh;
            }
        }
        const complexd half(0.0, 0.5 * dt);
        for (std::size_t j = 0; j < M; ++j) {
            const double dj = lap.diag[j] + pot[j] + (quasi ? coef[j] : 0.0);
            diag[j] = 1.0 + half * dj;
            lower[j] = half * lap.lower[j];
            upper[j] = half * lap.upper[j];
            complexd hu = dj * u0[j];
            if (j > 0) hu += lap.lower[j] * u0[j - 1];
            if (j + 1 < M) hu += lap.upper[j] * u0[j + 1];
            rhs[j] = u0[j] - half * hu;
        }
        out = tridiag_solve(lower, diag, upper, rhs);
    }

    // One step; throws std::runtime_error on rejection.
    FieldState advance(const FieldState& state, double dt) {
        const std::size_t M = state.values.size();
        const auto& u0 = state.values;
        const double ref = std::max(norm2(u0, state.grid), 1e-300);

        if (spec.h.is_zero()) {
            cayley_solve(u0, dt, u0, next);
        } else {
            // Picard iteration on the frozen coefficient with Aitken
            // (Irons-Tuck) relaxation: the near-origin nodes carry a weakly
            // damped oscillatory mode that plain iteration resolves too
            // slowly. Only the coefficient iterate z is relaxed; the
            // accepted state is always an exact Cayley image of u0.
            std::vector<complexd> z = u0, delta(M), delta_prev(M);
            double omega = 0.5;
            bool converged = false;
            for (int it = 0; it < cfg.cn_max_iter; ++it) {
                for (std::size_t j = 0; j < M; ++j)
                    mid[j] = 0.5 * (u0[j] + z[j]);
                cayley_solve(u0, dt, mid, next);
                double res2 = 0.0;
                for (std::size_t j = 0; j < M; ++j) {
                    if (!std::isfinite(next[j].real()) ||
                        !std::isfinite(next[j].imag()))
                        throw std::runtime_error("step: non-finite iterate");
                    delta[j] = next[j] - z[j];
                    res2 += std::norm(delta[j]) * state.grid.weight(j);
                }
                if (std::sqrt(res2) < cfg.cn_tol * ref) {
                    converged = true;
                    break;
                }
                if (it > 0) {
                    double num = 0.0, den = 0.0;
                    for (std::size_t j = 0; j < M; ++j) {
                        const complexd dd = delta[j] - delta_prev[j];
                        num += (delta_prev[j].real() * dd.real() +
                                delta_prev[j].imag() * dd.imag()) *
                               state.grid.weight(j);
                        den += std::norm(dd) * state.grid.weight(j);
                    }
                    if (den > 0.0)
                        omega = std::clamp(-omega * num / den, 0.05, 1.0);
                }
                for (std::size_t j = 0; j < M; ++j) z[j] += omega * delta[j];
                delta_prev = delta;
            }
            if (!converged)
                throw std::runtime_error("step: fixed point did not converge");
        }

        double change2 = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            if (!std::isfinite(next[j].real()) || !std::isfinite(next[j].imag()))
                throw std::runtime_error("step: non-finite iterate");
            change2 += std::norm(next[j] - u0[j]) * state.grid.weight(j);
        }
        if (std::sqrt(change2) > cfg.step_change_cap * ref)
            throw std::runtime_error("step: state change exceeds step_change_cap");

        FieldState out{state.grid, state.t + dt, next};
        return out;
    }
};

} // namespace

FieldState step(const FieldState& state, const ProblemSpec& spec, double dt,
                const StepperConfig& cfg) {
    if (dt == 0.0) throw std::invalid_argument("step: dt must be nonzero");
    Stepper st(spec, state.grid, cfg);
    return st.advance(state, dt);
}

RunOutcome run(const ProblemSpec& spec, const StepperConfig& cfg) {
    spec.validate();
    cfg.validate();

    RadialGrid grid(spec.dim, spec.radius, spec.grid_points);
    FieldState state = make_initial_state(spec, grid);

    TrajectoryAccumulator acc(spec, cfg.morawetz_lambda, cfg.r_bar);
    const auto& rec0 = acc.append(state);
    if (!std::isfinite(rec0.mass2) || !std::isfinite(rec0.grad_u2) ||
        !std::isfinite(rec0.grad_h2))
        throw std::invalid_argument("run: initial data leaves the energy space");

    RunOutcome out;
    out.dt_final = cfg.dt0;

    Stepper st(spec, grid, cfg);
    const double grad0 = std::max(acc.initial_gradient(), 1e-300);
    double dt = cfg.dt0;
    int accepted_streak = 0;
    long steps = 0;
    const double t_end = spec.t_end;

    auto gradient_now = [&](const FieldState& s) {
        return grad_u_squared(s) + grad_h_squared(s, spec);
    };

    auto finish = [&](RunStatus status, double t, std::string why) {
        out.status = status;
        out.t_final = t;
        out.steps_accepted = steps;
        out.dt_final = dt;
        out.detail = std::move(why);
        if (status == RunStatus::blowup_detected) out.blowup_time_estimate = t;
        if (acc.records().back().t != t) acc.append(state);
        out.records = acc.take_records();
        out.final_state = state;
        return out;
    };

    while (state.t < t_end - 1e-15 * std::max(t_end, 1.0)) {
        const double dt_try = std::min(dt, t_end - state.t);
        bool ok = true;
        std::string why;
        try {
            state = st.advance(state, dt_try);
        } catch (const std::runtime_error& e) {
            ok = false;
            why = e.what();
        }
        if (!ok) {
            dt *= 0.5;
            accepted_streak = 0;
            if (dt < cfg.dt_min) {
                const bool grown =
                    gradient_now(state) >= cfg.blowup_factor * grad0;
                if (grown)
                    return finish(RunStatus::blowup_detected, state.t,
                                  "gradient growth with dt collapse: " + why);
                return finish(RunStatus::step_collapse, state.t,
                              "dt collapsed without gradient growth: " + why);
            }
            continue;
        }
        ++steps;
        if (++accepted_streak >= 8 && dt < cfg.dt0) {
            dt = std::min(2.0 * dt, cfg.dt0);
            accepted_streak = 0;
        }
        if (steps % cfg.record_every == 0 ||
            state.t >= t_end - 1e-15 * std::max(t_end, 1.0)) {
            acc.append(state);
            if (state.boundary_contaminated())
                return finish(RunStatus::boundary_contaminated, state.t,
                              "field reached the outer boundary");
        }
    }
    return finish(RunStatus::completed, state.t, "");
}

} // namespace qnls
