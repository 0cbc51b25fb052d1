#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qnls/model.hpp"

namespace qnls {

/// Sobolev embedding data for H^1(R^N) -> L^{2*}.
struct SobolevConstants {
    int N;
    double two_star; // 2N/(N-2)
    double C_s;      // best constant in integral w^{2*} <= C_s (integral |grad w|^2)^{2*/2}
};

/// C_s by quadrature of the scale-invariant bubble quotient on
/// w(r) = (1 + r^2)^{-(N-2)/2}.
SobolevConstants sobolev_constants(int N, int points = 1 << 15,
                                   double radius = 1e3);

enum class BracketSign { nonneg, nonpos, indefinite };

/// Structural constants of the nonlinearity used by the blowup/global
/// criteria: s h'' <= k h', growth max(s^{1/2}, s^alpha) <= a [h + s^{1/2}]
/// for s >= 1, and the sign of the bracket 2 h'' h' s + (h')^2.
struct HConstants {
    double k = -0.5;
    double alpha = 0.5;
    double a = 1.0;
    std::optional<double> k1; // set when every exponent is < 1/2
    BracketSign bracket_sign = BracketSign::nonneg;
};

HConstants extract_h_constants(const NonlinearitySpec& h);

/// q_c = 2* / (max(2 alpha, 1) 2* - 2).
double critical_exponent(double alpha, int N);

/// sup { q : c r^{-m} in L^q + L^inf }, i.e. N/m; +inf for a bounded V.
double potential_q_sup(const PotentialSpec& V, int N);

/// L^q norm of the singular part restricted to r <= 1 (the L^q + L^inf
/// split of a power law); +inf when m q >= N.
double potential_V1_Lq_norm(const PotentialSpec& V, double q, int N);

enum class SetMembership { SI, SII, borderline };

const char* to_string(SetMembership s);

/// S(I) iff q_sup > q_c, S(II) iff q_sup < q_c; equality is the open
/// borderline and never resolved to a verdict.
SetMembership classify_SI_SII(const HConstants& h, const PotentialSpec& V,
                              int N);

struct C1Check {
    bool holds;
    double threshold_m; // max((2k+1)N, 0) + 2
};

/// Blowup-side condition [max((2k+1)N,0)+2] V + x.grad V <= 0 for the
/// power-law potential.
C1Check check_C1(const HConstants& h, const PotentialSpec& V, int N);

/// Global-side integrability condition: q > 1 and q >= q_c(alpha, N).
bool check_C2(const HConstants& h, double q, int N);

enum class Theorem2Case { i, ii, iii, iv, none };

const char* to_string(Theorem2Case c);

struct Theorem2Verdict {
    Theorem2Case which = Theorem2Case::none;
    std::optional<bool> smallness_ok; // case (ii) Sobolev smallness test
    bool borderline = false;          // q == q_c in the strict case (iii)
    std::string reason;
};

/// Select the global-existence case from (alpha, q, N). Case (ii) needs the
/// L^{N/2} norm of the singular part; omitting it there is a usage error.
Theorem2Verdict theorem2_case(const HConstants& h, double q, int N,
                              std::optional<double> V1_Lq_norm = {});

struct Theorem4Verdict {
    int which = 0; // 1..4, or 0 for not applicable
    std::optional<double> k1;
    std::optional<double> c;
    double predicted_l = 0.0;
    std::string reason;
};

/// Decay-rate case selection for V <= 0: predicted exponent l in
/// {2, 2-c, 2-N k1, 2-max(N k1, c)} for the rate C/t^l of
/// integral |grad h|^2 + |V||u|^2.
Theorem4Verdict theorem4_case(const HConstants& h, const PotentialSpec& V,
                              int N);

/// J(0) / (4 y(0)); the solution collapses before this time when the
/// blowup-side hypotheses hold. Throws std::domain_error for y0 <= 0.
double blowup_time_bound(double J0, double y0);

enum class Prop31Verdict { global, blowup_capable, indeterminate };

const char* to_string(Prop31Verdict v);

struct Prop31Result {
    Prop31Verdict verdict = Prop31Verdict::indeterminate;
    double threshold_m = 0.0; // the m watershed used, when one applies
    std::string reason;
    std::vector<std::string> side_conditions;
};

/// Verdict table for h(s) = (b s^alpha) nonlinearity with the repulsive
/// r^{-m} potential.
Prop31Result proposition31_verdict(double b, double alpha, double m, int N);

/// Exponent admissibility for the mixed-norm spacetime bound:
/// r_bar > 2 (else domain error), m1, m2 > 1, and
/// q > 2 r_bar (m_i r_bar - 2) / (2* l (r_bar - 2)) for both i.
bool spacetime_exponent_check(double q, double q_bar, double r_bar, double m1,
                              double m2, double l, int N);

/// Everything the analytic engine can say about one (h, V, N) instance.
struct ClassificationReport {
    int N = 3;
    HConstants h;
    double q_c = 0.0;
    double q_sup_of_V = 0.0;
    double q_used = 0.0; // q the Theorem-2 machinery was evaluated at
    SetMembership set_membership = SetMembership::borderline;
    C1Check c1{};
    bool thm1_applicable = false;
    std::string thm1_reason;
    Theorem2Verdict thm2;
    Theorem4Verdict thm4;
    std::optional<Prop31Result> prop31; // for the +r^{-m} setting
    std::optional<double> blowup_bound; // J0/(4 y0) when initial data known
    std::optional<double> energy0;
    std::optional<double> y0;

    std::string text() const;      // human-readable block
    std::string key_values() const; // machine-readable key=value block
};

/// Optional initial-data functionals feeding the side conditions.
struct InitialDiagnostics {
    double energy0;
    double J0;
    double y0;
    double mass2;
};

ClassificationReport classify(int N, const NonlinearitySpec& h,
                              const PotentialSpec& V,
                              std::optional<double> q = {},
                              std::optional<InitialDiagnostics> u0 = {});

} // namespace qnls
