#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "qnls/grid.hpp"
#include "qnls/model.hpp"

namespace qnls {

/// One time sample of every tracked functional. The accumulator columns
/// (theta_integral, morawetz_*) are running integrals over the records seen
/// so far, evaluated by the trapezoid rule in time.
struct DiagnosticsRecord {
    double t = 0.0;
    double mass2 = 0.0;    // integral |u|^2
    double grad_u2 = 0.0;  // integral |grad u|^2
    double grad_h2 = 0.0;  // integral |grad h(|u|^2)|^2
    double pot_term = 0.0; // integral V |u|^2
    double abs_pot = 0.0;  // integral |V| |u|^2
    double energy = 0.0;
    double J = 0.0; // variance integral r^2 |u|^2
    double y = 0.0; // Im integral conj(u) (x . grad u)
    double theta = 0.0;
    double P = 0.0;
    double P_residual = 0.0;
    double theta_integral = 0.0;  // 4 * integral_0^t tau theta(tau) dtau
    double morawetz_const = 0.0;  // accumulated with weight a == 1
    double morawetz_power = 0.0;  // accumulated with weight (|x|+t)^lambda
    double morawetz_rate = 0.0;   // instantaneous (|x|+t)^lambda integrand
    double morawetz_lambda = 0.0; // lambda the power columns were built with
    double Lr_norm = 0.0;         // (integral |u|^rbar)^{1/rbar}
    double r_bar = 0.0;           // rbar the norm column was built with
};

// ---- instantaneous functionals -------------------------------------------

double mass(const FieldState& state);
double variance_J(const FieldState& state);
double virial_y(const FieldState& state);
double energy(const FieldState& state, const ProblemSpec& spec);
double grad_u_squared(const FieldState& state);
double grad_h_squared(const FieldState& state, const ProblemSpec& spec);
double potential_term(const FieldState& state, const ProblemSpec& spec);
double abs_potential_term(const FieldState& state, const ProblemSpec& spec);

/// theta(t) = -4N integral [2 h'' h' |u|^2 + (h')^2] |u|^2 |grad u|^2 dx
///            - integral [2V + x.grad V] |u|^2 dx.
double theta(const FieldState& state, const ProblemSpec& spec);

/// integral [ |grad h(|u|^2)|^2 + |V| |u|^2 ] / (r + t)^lambda dx,
/// the spatial part of the power-weighted Morawetz integrand.
double morawetz_power_rate(const FieldState& state, const ProblemSpec& spec,
                           double lambda);

/// (integral |u|^rbar dx)^{1/rbar}.
double Lr_norm(const FieldState& state, double r_bar);

// ---- trajectory-level quantities ------------------------------------------

/// Initial-data context needed by the pseudo-conformal identity.
struct TrajectoryContext {
    double energy0 = 0.0;         // E(u0)
    double xu0_squared = 0.0;     // integral |x u0|^2
    double theta_integral = 0.0;  // 4 integral_0^t tau theta dtau so far
    bool valid = false;
};

struct PseudoConformal {
    double P;
    double residual; // P - [ integral |x u0|^2 + 4 integral tau theta dtau ]
};

/// P(t) through its virial expansion
///   P = integral |x u|^2 + 4 t y(t) + 8 t^2 E(u0),
/// with the residual against the conserved form. Throws std::logic_error
/// when the context has not been established.
PseudoConformal pseudo_conformal_P(const FieldState& state,
                                   const ProblemSpec& spec,
                                   const TrajectoryContext& ctx);

/// B(t) for a prescribed blowup time T > t, via the expansion
///   integral |x u|^2 - 4 (T-t) y + 8 (T-t)^2 E(u).
double blowup_B(const FieldState& state, const ProblemSpec& spec, double T);

/// Direct quadrature of |x u + 2i(T-t) (x/r) du/dr|^2 plus the
/// 4(T-t)^2 [ |grad h|^2 - V|u|^2 ] terms; cross-check route for blowup_B.
double blowup_B_direct(const FieldState& state, const ProblemSpec& spec,
                       double T);

/// Builds DiagnosticsRecords along a run and maintains the running
/// trapezoid accumulators. The first appended state defines t = 0 data.
class TrajectoryAccumulator {
  public:
    TrajectoryAccumulator(const ProblemSpec& spec, double morawetz_lambda,
                          double r_bar);

    const DiagnosticsRecord& append(const FieldState& state);

    const std::vector<DiagnosticsRecord>& records() const { return records_; }
    std::vector<DiagnosticsRecord> take_records() { return std::move(records_); }
    const TrajectoryContext& context() const { return ctx_; }
    double initial_gradient() const { return grad0_; }

  private:
    ProblemSpec spec_;
    double lambda_;
    double r_bar_;
    TrajectoryContext ctx_;
    double grad0_ = 0.0;
    double prev_const_rate_ = 0.0;
    std::vector<DiagnosticsRecord> records_;
};

// ---- operations over stored records ----------------------------------------

/// Time weight for the spacetime (Morawetz) estimates.
struct MorawetzWeightSpec {
    enum class Kind { constant, power, split };
    Kind kind = Kind::constant;
    double a = 1.0;      // constant value, or t^lambda coefficient for t <= 1
    double b = 1.0;      // t^mu coefficient for t >= 1 (split kind)
    double lambda = 0.5; // power/split exponent, 0 <= lambda < 1
    double mu = 0.5;     // split exponent for t >= 1

    void validate() const;
};

/// Trapezoid-in-time of integral [ |grad h|^2 + |V||u|^2 ] / a(x,t) dx up to
/// the last record. The power kind requires records built with the same
/// lambda. Throws std::invalid_argument on empty records.
double morawetz_accumulate(const std::vector<DiagnosticsRecord>& records,
                           const MorawetzWeightSpec& weight);

struct SpacetimeNormSpec {
    double q_bar = 4.0;
    double r_bar = 4.0;
    double M_exp = 1.0;

    void validate() const; // r_bar > 2, q_bar >= 1
};

/// ( integral_0^T ( integral |u|^rbar dx )^{qbar/rbar} dt )^{1/qbar} by the
/// trapezoid rule over records. Records must carry the same r_bar.
double spacetime_norm(const std::vector<DiagnosticsRecord>& records,
                      const SpacetimeNormSpec& spec);

struct DecayFit {
    double l; // value ~ C / t^l
    double C;
};

/// Least-squares fit of log(selector(record)) against log(t) over records
/// with t >= max(t_min, 1). Requires at least 8 records in the window and
/// positive values throughout; throws std::runtime_error otherwise.
DecayFit fit_decay(const std::vector<DiagnosticsRecord>& records,
                   const std::function<double(const DiagnosticsRecord&)>& sel,
                   double t_min);

/// Fixed CSV emission, one row per record, 17 significant digits.
void write_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records);

} // namespace qnls
