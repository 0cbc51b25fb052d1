#include "qnls/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace qnls {

namespace {

std::vector<double> abs_squared(const FieldState& state) {
    std::vector<double> s(state.values.size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = std::norm(state.values[j]);
    return s;
}

// nodal |du/dr|^2 from the real and imaginary parts
std::vector<double> grad_u_density(const FieldState& state) {
    const int M = state.grid.size();
    std::vector<double> re(M), im(M);
    for (int j = 0; j < M; ++j) {
        re[j] = state.values[j].real();
        im[j] = state.values[j].imag();
    }
    const auto dre = radial_gradient(re, state.grid);
    const auto dim_ = radial_gradient(im, state.grid);
    std::vector<double> d(M);
    for (int j = 0; j < M; ++j) d[j] = dre[j] * dre[j] + dim_[j] * dim_[j];
    return d;
}

// |grad h(|u|^2)|^2 density via the chain rule h'(s) ds/dr
std::vector<double> grad_h_density(const FieldState& state,
                                   const ProblemSpec& spec) {
    const int M = state.grid.size();
    std::vector<double> d(M, 0.0);
    if (spec.h.is_zero()) return d;
    const auto s = abs_squared(state);
    const auto ds = radial_gradient(s, state.grid);
    for (int j = 0; j < M; ++j) {
        const double g = eval_h(spec.h, s[j]).hp * ds[j];
        d[j] = g * g;
    }
    return d;
}

std::vector<double> potential_table(const FieldState& state,
                                    const ProblemSpec& spec) {
    std::vector<double> v(state.grid.size());
    for (int j = 0; j < state.grid.size(); ++j)
        v[j] = eval_V(spec.V, state.grid.node(j)).V;
    return v;
}

double trapezoid_step(double t0, double f0, double t1, double f1) {
    return 0.5 * (f0 + f1) * (t1 - t0);
}

} // namespace

double mass(const FieldState& state) {
    return std::sqrt(integrate(abs_squared(state), state.grid));
}

double variance_J(const FieldState& state) {
    auto s = abs_squared(state);
    for (int j = 0; j < state.grid.size(); ++j) {
        const double r = state.grid.node(j);
        s[j] *= r * r;
    }
    return integrate(s, state.grid);
}

double virial_y(const FieldState& state) {
    const int M = state.grid.size();
    std::vector<double> re(M), im(M);
    for (int j = 0; j < M; ++j) {
        re[j] = state.values[j].real();
        im[j] = state.values[j].imag();
    }
    const auto dre = radial_gradient(re, state.grid);
    const auto dim_ = radial_gradient(im, state.grid);
    std::vector<double> f(M);
    // Im(conj(u) r du/dr) = r (re * d im - im * d re)
    for (int j = 0; j < M; ++j)
        f[j] = state.grid.node(j) * (re[j] * dim_[j] - im[j] * dre[j]);
    return integrate(f, state.grid);
}

double grad_u_squared(const FieldState& state) {
    return integrate(grad_u_density(state), state.grid);
}

double grad_h_squared(const FieldState& state, const ProblemSpec& spec) {
    return integrate(grad_h_density(state, spec), state.grid);
}

double potential_term(const FieldState& state, const ProblemSpec& spec) {
    auto s = abs_squared(state);
    const auto v = potential_table(state, spec);
    for (std::size_t j = 0; j < s.size(); ++j) s[j] *= v[j];
    return integrate(s, state.grid);
}

double abs_potential_term(const FieldState& state, const ProblemSpec& spec) {
    auto s = abs_squared(state);
    const auto v = potential_table(state, spec);
    for (std::size_t j = 0; j < s.size(); ++j) s[j] *= std::abs(v[j]);
    return integrate(s, state.grid);
}

double energy(const FieldState& state, const ProblemSpec& spec) {
    return 0.5 * (grad_u_squared(state) + grad_h_squared(state, spec)) -
           0.5 * potential_term(state, spec);
}

double theta(const FieldState& state, const ProblemSpec& spec) {
    const int M = state.grid.size();
    const int N = state.grid.dim();
    const auto s = abs_squared(state);
    const auto gu = grad_u_density(state);
    std::vector<double> f(M);
    for (int j = 0; j < M; ++j) {
        double quasi = 0.0;
        if (!spec.h.is_zero()) {
            const auto he = eval_h(spec.h, s[j]);
            quasi = -4.0 * N * (2.0 * he.hpp * he.hp * s[j] + he.hp * he.hp) *
                    s[j] * gu[j];
        }
        const auto ve = eval_V(spec.V, state.grid.node(j));
        f[j] = quasi - (2.0 * ve.V + ve.xdV) * s[j];
    }
    return integrate(f, state.grid);
}

double morawetz_power_rate(const FieldState& state, const ProblemSpec& spec,
                           double lambda) {
    const auto gh = grad_h_density(state, spec);
    const auto s = abs_squared(state);
    std::vector<double> f(state.grid.size());
    for (int j = 0; j < state.grid.size(); ++j) {
        const double r = state.grid.node(j);
        const double v = std::abs(eval_V(spec.V, r).V);
        f[j] = (gh[j] + v * s[j]) / std::pow(r + state.t, lambda);
    }
    return integrate(f, state.grid);
}

double Lr_norm(const FieldState& state, double r_bar) {
    std::vector<double> f(state.grid.size());
    for (int j = 0; j < state.grid.size(); ++j)
        f[j] = std::pow(std::abs(state.values[j]), r_bar);
    return std::pow(integrate(f, state.grid), 1.0 / r_bar);
}

PseudoConformal pseudo_conformal_P(const FieldState& state,
                                   const ProblemSpec& spec,
                                   const TrajectoryContext& ctx) {
    if (!ctx.valid)
        throw std::logic_error("pseudo_conformal_P: trajectory context missing");
    (void)spec;
    const double t = state.t;
    const double P = variance_J(state) + 4.0 * t * virial_y(state) +
                     8.0 * t * t * ctx.energy0;
    return {P, P - (ctx.xu0_squared + ctx.theta_integral)};
}

double blowup_B(const FieldState& state, const ProblemSpec& spec, double T) {
    if (!(T > state.t))
        throw std::domain_error("blowup_B: requires T > t");
    const double dt = T - state.t;
    return variance_J(state) - 4.0 * dt * virial_y(state) +
           8.0 * dt * dt * energy(state, spec);
}

double blowup_B_direct(const FieldState& state, const ProblemSpec& spec,
                       double T) {
    if (!(T > state.t))
        throw std::domain_error("blowup_B_direct: requires T > t");
    const double dt = T - state.t;
    const int M = state.grid.size();
    std::vector<double> re(M), im(M);
    for (int j = 0; j < M; ++j) {
        re[j] = state.values[j].real();
        im[j] = state.values[j].imag();
    }
    const auto dre = radial_gradient(re, state.grid);
    const auto dim_ = radial_gradient(im, state.grid);
    std::vector<double> f(M);
    for (int j = 0; j < M; ++j) {
        const double r = state.grid.node(j);
        const complexd du(dre[j], dim_[j]);
        f[j] = std::norm(r * state.values[j] + complexd(0.0, 2.0 * dt) * du);
    }
    const double operator_part = integrate(f, state.grid);
    return operator_part +
           4.0 * dt * dt *
               (grad_h_squared(state, spec) - potential_term(state, spec));
}

TrajectoryAccumulator::TrajectoryAccumulator(const ProblemSpec& spec,
                                             double morawetz_lambda,
                                             double r_bar)
    : spec_(spec), lambda_(morawetz_lambda), r_bar_(r_bar) {}

const DiagnosticsRecord& TrajectoryAccumulator::append(const FieldState& state) {
    DiagnosticsRecord rec;
    rec.t = state.t;
    rec.mass2 = integrate(abs_squared(state), state.grid);
    rec.grad_u2 = grad_u_squared(state);
    rec.grad_h2 = grad_h_squared(state, spec_);
    rec.pot_term = potential_term(state, spec_);
    rec.abs_pot = abs_potential_term(state, spec_);
    rec.energy = 0.5 * (rec.grad_u2 + rec.grad_h2) - 0.5 * rec.pot_term;
    rec.J = variance_J(state);
    rec.y = virial_y(state);
    rec.theta = theta(state, spec_);
    rec.morawetz_rate = morawetz_power_rate(state, spec_, lambda_);
    rec.morawetz_lambda = lambda_;
    rec.Lr_norm = Lr_norm(state, r_bar_);
    rec.r_bar = r_bar_;

    const double const_rate = rec.grad_h2 + rec.abs_pot;
    if (records_.empty()) {
        ctx_.energy0 = rec.energy;
        ctx_.xu0_squared = rec.J;
        ctx_.theta_integral = 0.0;
        ctx_.valid = true;
        grad0_ = rec.grad_u2 + rec.grad_h2;
    } else {
        const auto& prev = records_.back();
        ctx_.theta_integral += trapezoid_step(prev.t, 4.0 * prev.t * prev.theta,
                                              rec.t, 4.0 * rec.t * rec.theta);
        rec.morawetz_const =
            prev.morawetz_const +
            trapezoid_step(prev.t, prev_const_rate_, rec.t, const_rate);
        rec.morawetz_power =
            prev.morawetz_power +
            trapezoid_step(prev.t, prev.morawetz_rate, rec.t, rec.morawetz_rate);
    }
    prev_const_rate_ = const_rate;
    rec.theta_integral = ctx_.theta_integral;

    const auto pc = pseudo_conformal_P(state, spec_, ctx_);
    rec.P = pc.P;
    rec.P_residual = pc.residual;

    records_.push_back(rec);
    return records_.back();
}

void MorawetzWeightSpec::validate() const {
    switch (kind) {
        case Kind::constant:
            if (!(a > 0.0))
                throw std::domain_error("morawetz weight: constant a must be > 0");
            break;
        case Kind::power:
            if (!(lambda >= 0.0 && lambda < 1.0))
                throw std::domain_error("morawetz weight: need 0 <= lambda < 1");
            break;
        case Kind::split:
            if (!(a > 0.0 && b > 0.0))
                throw std::domain_error("morawetz weight: split coefficients must be > 0");
            if (!(lambda < 1.0))
                throw std::domain_error("morawetz weight: need lambda < 1");
            break;
    }
}

double morawetz_accumulate(const std::vector<DiagnosticsRecord>& records,
                           const MorawetzWeightSpec& weight) {
    if (records.empty())
        throw std::invalid_argument("morawetz_accumulate: no records");
    weight.validate();

    auto series_rate = [&](const DiagnosticsRecord& r) -> double {
        switch (weight.kind) {
            case MorawetzWeightSpec::Kind::constant:
                return (r.grad_h2 + r.abs_pot) / weight.a;
            case MorawetzWeightSpec::Kind::power:
                return r.morawetz_rate;
            case MorawetzWeightSpec::Kind::split: {
                const double denom = (r.t <= 1.0)
                                         ? weight.a * std::pow(r.t, weight.lambda)
                                         : weight.b * std::pow(r.t, weight.mu);
                return (r.grad_h2 + r.abs_pot) / denom;
            }
        }
        return 0.0;
    };

    if (weight.kind == MorawetzWeightSpec::Kind::power) {
        for (const auto& r : records)
            if (std::abs(r.morawetz_lambda - weight.lambda) > 1e-12)
                throw std::invalid_argument(
                    "morawetz_accumulate: records were built with a different lambda");
    }

    double acc = 0.0;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& a = records[i - 1];
        const auto& b = records[i];
        // split weights diverge at t = 0; start at the first positive time
        if (weight.kind == MorawetzWeightSpec::Kind::split &&
            weight.lambda > 0.0 && a.t == 0.0)
            continue;
        acc += trapezoid_step(a.t, series_rate(a), b.t, series_rate(b));
    }
    return acc;
}

void SpacetimeNormSpec::validate() const {
    if (!(r_bar > 2.0))
        throw std::domain_error("spacetime norm: r_bar must be > 2");
    if (!(q_bar >= 1.0))
        throw std::domain_error("spacetime norm: q_bar must be >= 1");
}

double spacetime_norm(const std::vector<DiagnosticsRecord>& records,
                      const SpacetimeNormSpec& spec) {
    spec.validate();
    if (records.empty())
        throw std::invalid_argument("spacetime_norm: no records");
    for (const auto& r : records)
        if (std::abs(r.r_bar - spec.r_bar) > 1e-12)
            throw std::invalid_argument(
                "spacetime_norm: records were built with a different r_bar");
    double acc = 0.0;
    auto level = [&](const DiagnosticsRecord& r) {
        // (integral |u|^rbar)^{qbar/rbar} from the stored norm
        return std::pow(r.Lr_norm, spec.q_bar);
    };
    for (std::size_t i = 1; i < records.size(); ++i)
        acc += trapezoid_step(records[i - 1].t, level(records[i - 1]),
                              records[i].t, level(records[i]));
    return std::pow(acc, 1.0 / spec.q_bar);
}

DecayFit fit_decay(const std::vector<DiagnosticsRecord>& records,
                   const std::function<double(const DiagnosticsRecord&)>& sel,
                   double t_min) {
    const double lo = std::max(t_min, 1.0);
    std::vector<double> lt, lv;
    for (const auto& r : records) {
        if (r.t < lo) continue;
        const double v = sel(r);
        if (!(v > 0.0))
            throw std::runtime_error("fit_decay: nonpositive value in fit window");
        lt.push_back(std::log(r.t));
        lv.push_back(std::log(v));
    }
    if (lt.size() < 8)
        throw std::runtime_error("fit_decay: need at least 8 records with t >= max(t_min, 1)");
    const double n = static_cast<double>(lt.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lt.size(); ++i) {
        mx += lt[i];
        my += lv[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lt.size(); ++i) {
        sxx += (lt[i] - mx) * (lt[i] - mx);
        sxy += (lt[i] - mx) * (lv[i] - my);
    }
    if (sxx == 0.0) throw std::runtime_error("fit_decay: degenerate time window");
    const double slope = sxy / sxx;
    return {-slope, std::exp(my - slope * mx)};
}

void write_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records) {
    os << "t,mass2,grad_u2,grad_h2,pot_term,energy,J,y,theta,P,P_residual,"
          "morawetz_const,morawetz_power,Lr_norm\n";
    char buf[32];
    auto put = [&](double v, char sep) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf << sep;
    };
    for (const auto& r : records) {
        put(r.t, ',');
        put(r.mass2, ',');
        put(r.grad_u2, ',');
        put(r.grad_h2, ',');
        put(r.pot_term, ',');
        put(r.energy, ',');
        put(r.J, ',');
        put(r.y, ',');
        put(r.theta, ',');
        put(r.P, ',');
        put(r.P_residual, ',');
        put(r.morawetz_const, ',');
        put(r.morawetz_power, ',');
        put(r.Lr_norm, '\n');
    }
}

} // namespace qnls
