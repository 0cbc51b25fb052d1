#include "qnls/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qnls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double two_star_of(int N) { return 2.0 * N / (N - 2.0); }

bool nearly_equal(double a, double b, double rel = 1e-12) {
    return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1.0});
}

} // namespace

SobolevConstants sobolev_constants(int N, int points, double radius) {
    if (N < 3) throw std::invalid_argument("sobolev_constants: N must be >= 3");
    const double two_star = two_star_of(N);
    // Rayleigh quotient of the bubble w = (1 + r^2)^{-(N-2)/2}; the quotient
    // is dilation invariant so a single profile suffices. grad w is used in
    // closed form: w' = -(N-2) r (1 + r^2)^{-N/2}.
    const double dr = radius / points;
    const double surface = 2.0 * std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N);
    double num = 0.0, den = 0.0;
    for (int j = 0; j < points; ++j) {
        const double r = (j + 0.5) * dr;
        const double base = 1.0 + r * r;
        const double w = std::pow(base, -0.5 * (N - 2));
        const double dw = -(N - 2.0) * r * std::pow(base, -0.5 * N);
        const double vol = std::pow(r, N - 1) * dr;
        num += std::pow(w, two_star) * vol;
        den += dw * dw * vol;
    }
    num *= surface;
    den *= surface;
    return {N, two_star, num / std::pow(den, 0.5 * two_star)};
}

HConstants extract_h_constants(const NonlinearitySpec& h) {
    HConstants out;
    if (h.is_zero()) return out; // k = -1/2, alpha = 1/2, a = 1

    const auto& terms = h.terms();
    double alpha_max = 0.0, alpha_min = kInf;
    bool all_below_half = true, all_at_least_half = true;
    for (const auto& t : terms) {
        alpha_max = std::max(alpha_max, t.alpha);
        alpha_min = std::min(alpha_min, t.alpha);
        if (t.alpha >= 0.5) all_below_half = false;
        if (t.alpha < 0.5) all_at_least_half = false;
    }
    out.k = alpha_max - 1.0; // termwise s h'' = (alpha_i - 1) (h' term)
    out.alpha = alpha_max;

    // growth constant: dense log-sampling of the required ratio on [1, 1e6]
    double worst = 0.0;
    const int samples = 240;
    for (int i = 0; i <= samples; ++i) {
        const double s = std::pow(10.0, 6.0 * i / samples);
        const double lhs = std::max(std::sqrt(s), std::pow(s, out.alpha));
        const double rhs = eval_h(h, s).h + std::sqrt(s);
        worst = std::max(worst, lhs / rhs);
    }
    out.a = 1.01 * worst;

    if (all_below_half) {
        double k1 = 0.0;
        for (const auto& t : terms) k1 = std::max(k1, 1.0 - 2.0 * t.alpha);
        out.k1 = k1;
    }
    out.bracket_sign = all_at_least_half  ? BracketSign::nonneg
                       : all_below_half   ? BracketSign::nonpos
                                          : BracketSign::indefinite;
    return out;
}

double critical_exponent(double alpha, int N) {
    if (!(alpha > 0.0) || N < 3)
        throw std::invalid_argument("critical_exponent: need alpha > 0, N >= 3");
    const double ts = two_star_of(N);
    return ts / (std::max(2.0 * alpha, 1.0) * ts - 2.0);
}

double potential_q_sup(const PotentialSpec& V, int N) {
    if (V.c == 0.0 || V.m == 0.0) return kInf;
    return N / V.m;
}

double potential_V1_Lq_norm(const PotentialSpec& V, double q, int N) {
    if (!(q > 0.0)) throw std::invalid_argument("potential_V1_Lq_norm: q must be > 0");
    if (V.c == 0.0 || V.m == 0.0) return 0.0; // no singular part
    if (V.m * q >= N) return kInf;
    const double surface = 2.0 * std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N);
    // integral_{r<=1} (c r^-m)^q dx = surface c^q / (N - m q)
    return V.c * std::pow(surface / (N - V.m * q), 1.0 / q);
}

const char* to_string(SetMembership s) {
    switch (s) {
        case SetMembership::SI: return "S(I)";
        case SetMembership::SII: return "S(II)";
        case SetMembership::borderline: return "borderline";
    }
    return "?";
}

SetMembership classify_SI_SII(const HConstants& h, const PotentialSpec& V,
                              int N) {
    const double qc = critical_exponent(h.alpha, N);
    const double qs = potential_q_sup(V, N);
    if (qs == kInf) return SetMembership::SI;
    if (nearly_equal(qs, qc)) return SetMembership::borderline;
    return qs > qc ? SetMembership::SI : SetMembership::SII;
}

C1Check check_C1(const HConstants& h, const PotentialSpec& V, int N) {
    const double threshold = std::max((2.0 * h.k + 1.0) * N, 0.0) + 2.0;
    bool holds;
    if (V.c == 0.0) {
        holds = threshold * V.v_bounded <= 0.0;
    } else {
        // x.grad V = -m V for the power law, so the condition reads
        // (threshold - m) V <= 0 pointwise
        holds = (V.sign > 0) ? (V.m >= threshold) : (V.m <= threshold);
        if (V.v_bounded != 0.0) holds = holds && V.v_bounded <= 0.0;
    }
    return {holds, threshold};
}

bool check_C2(const HConstants& h, double q, int N) {
    if (!(q > 0.0)) throw std::invalid_argument("check_C2: q must be > 0");
    return q > 1.0 && q >= critical_exponent(h.alpha, N) * (1.0 - 1e-15);
}

const char* to_string(Theorem2Case c) {
    switch (c) {
        case Theorem2Case::i: return "(i)";
        case Theorem2Case::ii: return "(ii)";
        case Theorem2Case::iii: return "(iii)";
        case Theorem2Case::iv: return "(iv)";
        case Theorem2Case::none: return "none";
    }
    return "?";
}

Theorem2Verdict theorem2_case(const HConstants& h, double q, int N,
                              std::optional<double> V1_Lq_norm) {
    Theorem2Verdict v;
    if (!check_C2(h, q, N)) {
        v.reason = "condition (C2) fails: needs q > 1 and q >= q_c";
        return v;
    }
    const double alpha = h.alpha;
    const double ts = two_star_of(N);
    const double alpha_edge = (N - 1.0) / N;
    if (alpha <= 0.5) {
        if (q > 0.5 * N) {
            v.which = Theorem2Case::i;
            v.reason = "alpha <= 1/2 and q > N/2";
        } else if (nearly_equal(q, 0.5 * N)) {
            if (!V1_Lq_norm)
                throw std::invalid_argument(
                    "theorem2_case: case (ii) needs the L^{N/2} norm of V1");
            v.which = Theorem2Case::ii;
            // (integral |V1|^{N/2} dx)^{2/N} is the L^{N/2} norm itself, so
            // the test reads C_s^{2/2*} ||V1||_{L^{N/2}} < 1
            const double Cs = sobolev_constants(N).C_s;
            v.smallness_ok = std::pow(Cs, 2.0 / ts) * (*V1_Lq_norm) < 1.0;
            v.reason = "alpha <= 1/2 and q = N/2: Sobolev smallness test";
        } else {
            v.reason = "alpha <= 1/2 but q < N/2";
        }
    } else if (alpha < alpha_edge) {
        const double qc = critical_exponent(alpha, N);
        if (nearly_equal(q, qc)) {
            v.borderline = true;
            v.reason = "q = q_c with 1/2 < alpha < (N-1)/N: open borderline";
        } else if (q > qc) {
            v.which = Theorem2Case::iii;
            v.reason = "1/2 < alpha < (N-1)/N and q > q_c";
        } else {
            v.reason = "q < q_c";
        }
    } else {
        const double thr = alpha * ts / (alpha * ts - 1.0);
        if (q >= thr * (1.0 - 1e-15)) {
            v.which = Theorem2Case::iv;
            v.reason = "alpha >= (N-1)/N and q >= alpha 2*/(alpha 2* - 1)";
        } else {
            v.reason = "alpha >= (N-1)/N but q below alpha 2*/(alpha 2* - 1)";
        }
    }
    return v;
}

Theorem4Verdict theorem4_case(const HConstants& h, const PotentialSpec& V,
                              int N) {
    Theorem4Verdict v;
    if (V.c != 0.0 && V.sign > 0) {
        v.reason = "Theorem 4 part 1 requires V(x)<=0";
        return v;
    }
    if (V.c == 0.0 && V.v_bounded > 0.0) {
        v.reason = "Theorem 4 part 1 requires V(x)<=0";
        return v;
    }

    // potential side: 2V + x.grad V = (2 - m)V for the power law
    bool pot_nonneg, pot_nonpos_with_c = false;
    double c_const = 0.0;
    if (V.c == 0.0) {
        if (V.v_bounded == 0.0) {
            pot_nonneg = true; // V == 0
        } else {
            v.reason = "constant negative part violates -c|V| <= 2V + x.grad V with c < 2";
            return v;
        }
    } else if (V.m >= 2.0) {
        pot_nonneg = true;
    } else if (V.m > 0.0) {
        pot_nonneg = false;
        pot_nonpos_with_c = true;
        c_const = 2.0 - V.m;
    } else {
        v.reason = "m = 0 singular part behaves as a constant";
        return v;
    }

    // nonlinearity side: sign of 2 h'' h' s + (h')^2
    if (h.bracket_sign == BracketSign::indefinite) {
        v.reason = "mixed-sign bracket 2 h'' h' s + (h')^2";
        return v;
    }
    const bool bracket_nonneg = h.bracket_sign == BracketSign::nonneg;
    if (!bracket_nonneg) {
        if (!h.k1) {
            v.reason = "no k1 available for the bracket lower bound";
            return v;
        }
        if (!(*h.k1 < 2.0 / N)) {
            v.reason = "k1 >= 2/N: decay cases 3/4 do not apply";
            return v;
        }
        v.k1 = h.k1;
    }

    if (bracket_nonneg && pot_nonneg) {
        v.which = 1;
        v.predicted_l = 2.0;
        v.reason = "bracket >= 0 and 2V + x.grad V >= 0";
    } else if (bracket_nonneg && pot_nonpos_with_c) {
        v.which = 2;
        v.c = c_const;
        v.predicted_l = 2.0 - c_const;
        v.reason = "bracket >= 0 and -c|V| <= 2V + x.grad V <= 0";
    } else if (!bracket_nonneg && pot_nonneg) {
        v.which = 3;
        v.predicted_l = 2.0 - N * (*v.k1);
        v.reason = "-k1 (h')^2 <= bracket <= 0 and 2V + x.grad V >= 0";
    } else {
        v.which = 4;
        v.c = c_const;
        v.predicted_l = 2.0 - std::max(N * (*v.k1), c_const);
        v.reason = "-k1 (h')^2 <= bracket <= 0 and -c|V| <= 2V + x.grad V <= 0";
    }
    return v;
}

double blowup_time_bound(double J0, double y0) {
    if (!(y0 > 0.0))
        throw std::domain_error("blowup_time_bound: requires y(0) > 0");
    if (!(J0 >= 0.0))
        throw std::domain_error("blowup_time_bound: J(0) must be >= 0");
    return J0 / (4.0 * y0);
}

const char* to_string(Prop31Verdict v) {
    switch (v) {
        case Prop31Verdict::global: return "global";
        case Prop31Verdict::blowup_capable: return "blowup-capable";
        case Prop31Verdict::indeterminate: return "indeterminate";
    }
    return "?";
}

Prop31Result proposition31_verdict(double b, double alpha, double m, int N) {
    if (b < 0.0) throw std::invalid_argument("proposition31_verdict: b must be >= 0");
    if (N < 3) throw std::invalid_argument("proposition31_verdict: N must be >= 3");
    Prop31Result out;
    const double ts = two_star_of(N);
    const std::vector<std::string> blowup_sides = {
        "E(u0) < 0", "x u0 in L^2", "Im integral conj(u0) (x.grad u0) dx >= 0"};
    if (b == 0.0) {
        out.threshold_m = 2.0;
        if (m < 2.0) {
            out.verdict = Prop31Verdict::global;
            out.reason = "b = 0 and m < 2";
        } else {
            out.verdict = Prop31Verdict::blowup_capable;
            out.reason = "b = 0 and m >= 2";
            out.side_conditions = blowup_sides;
        }
        return out;
    }
    if (!(alpha > 0.0))
        throw std::invalid_argument("proposition31_verdict: alpha must be > 0");
    const double alpha_edge = (N - 1.0) / N;
    if (alpha <= 0.5) {
        out.threshold_m = 2.0;
        if (m < 2.0) {
            out.verdict = Prop31Verdict::global;
            out.reason = "0 < alpha <= 1/2 and m < 2";
        } else {
            out.reason = "0 < alpha <= 1/2 with m >= 2 is not covered";
        }
    } else if (alpha < alpha_edge) {
        out.threshold_m = N * (2.0 * alpha * ts - 2.0) / ts;
        if (m < out.threshold_m) {
            out.verdict = Prop31Verdict::global;
            out.reason = "1/2 < alpha < (N-1)/N and m < N(2 alpha 2* - 2)/2*";
        } else {
            out.verdict = Prop31Verdict::blowup_capable;
            out.reason = "1/2 < alpha < (N-1)/N and m >= N(2 alpha 2* - 2)/2*";
            out.side_conditions = blowup_sides;
        }
    } else {
        out.threshold_m = N * (alpha * ts - 1.0) / (alpha * ts);
        if (m < out.threshold_m) {
            out.verdict = Prop31Verdict::global;
            out.reason = "alpha >= (N-1)/N and m < N(alpha 2* - 1)/(alpha 2*)";
        } else {
            out.reason = "alpha >= (N-1)/N with m >= N(alpha 2* - 1)/(alpha 2*) is not covered";
        }
    }
    return out;
}

bool spacetime_exponent_check(double q, double q_bar, double r_bar, double m1,
                              double m2, double l, int N) {
    if (!(r_bar > 2.0))
        throw std::domain_error("spacetime_exponent_check: r_bar must be > 2");
    if (!(q_bar >= 1.0))
        throw std::domain_error("spacetime_exponent_check: q_bar must be >= 1");
    if (!(q > 0.0 && l > 0.0))
        throw std::domain_error("spacetime_exponent_check: q and l must be > 0");
    if (!(m1 > 1.0 && m2 > 1.0)) return false;
    const double ts = two_star_of(N);
    const double thr1 = 2.0 * r_bar * (m1 * r_bar - 2.0) / (ts * l * (r_bar - 2.0));
    const double thr2 = 2.0 * r_bar * (m2 * r_bar - 2.0) / (ts * l * (r_bar - 2.0));
    return q > thr1 && q > thr2;
}

ClassificationReport classify(int N, const NonlinearitySpec& h,
                              const PotentialSpec& V, std::optional<double> q,
                              std::optional<InitialDiagnostics> u0) {
    ClassificationReport rep;
    rep.N = N;
    rep.h = extract_h_constants(h);
    rep.q_c = critical_exponent(rep.h.alpha, N);
    rep.q_sup_of_V = potential_q_sup(V, N);
    rep.set_membership = classify_SI_SII(rep.h, V, N);
    rep.c1 = check_C1(rep.h, V, N);

    // Theorem-2 machinery needs a concrete q; when none is given pick a
    // representative below the integrability sup.
    if (q) {
        rep.q_used = *q;
    } else if (rep.q_sup_of_V == kInf) {
        rep.q_used = std::max(rep.q_c, 0.5 * N) + 1.0;
    } else {
        rep.q_used = 0.5 * (rep.q_c + rep.q_sup_of_V);
    }
    std::optional<double> v1norm;
    if (rep.q_used > 0.0) {
        const double n = potential_V1_Lq_norm(V, rep.q_used, N);
        if (std::isfinite(n)) v1norm = n;
    }
    try {
        rep.thm2 = theorem2_case(rep.h, rep.q_used, N, v1norm);
    } catch (const std::invalid_argument&) {
        rep.thm2.reason = "case (ii) reached without a finite L^{N/2} norm";
    }
    rep.thm4 = theorem4_case(rep.h, V, N);

    // the r^{-m} verdict table covers h == 0 and single-power h
    if (V.sign > 0 && V.c > 0.0 && h.terms().size() <= 1) {
        const double b = h.is_zero() ? 0.0 : h.terms().front().b;
        const double alpha = h.is_zero() ? 0.5 : rep.h.alpha;
        rep.prop31 = proposition31_verdict(b, alpha, V.m, N);
    }

    std::ostringstream t1;
    if (rep.c1.holds) {
        t1 << "condition (C1) holds (threshold m = " << rep.c1.threshold_m << ")";
        rep.thm1_applicable = true;
        if (u0) {
            if (!(u0->energy0 <= 0.0)) {
                rep.thm1_applicable = false;
                t1 << "; E(u0) > 0 violates the side condition";
            }
            if (!(u0->y0 > 0.0)) {
                rep.thm1_applicable = false;
                t1 << "; y(0) <= 0 violates the side condition";
            }
        } else {
            t1 << "; side conditions E(u0) <= 0, y(0) > 0, x u0 in L^2 not checked";
        }
    } else {
        t1 << "condition (C1) fails (threshold m = " << rep.c1.threshold_m << ")";
    }
    rep.thm1_reason = t1.str();

    if (u0) {
        rep.energy0 = u0->energy0;
        rep.y0 = u0->y0;
        if (u0->y0 > 0.0) rep.blowup_bound = blowup_time_bound(u0->J0, u0->y0);
    }
    return rep;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

} // namespace

std::string ClassificationReport::text() const {
    std::ostringstream os;
    os << "classification (N = " << N << ")\n";
    os << "  h constants: k = " << fmt(h.k) << ", alpha = " << fmt(h.alpha)
       << ", a = " << fmt(h.a);
    if (h.k1) os << ", k1 = " << fmt(*h.k1);
    os << "\n";
    os << "  critical exponent q_c = " << fmt(q_c) << "\n";
    os << "  potential integrability sup q = " << fmt(q_sup_of_V) << "\n";
    os << "  membership: " << to_string(set_membership);
    if (set_membership == SetMembership::borderline)
        os << " (q = q_c is the open case; no verdict)";
    os << "\n";
    os << "  Theorem 1 (blowup): "
       << (thm1_applicable ? "applicable" : "not applicable") << "; "
       << thm1_reason;
    if (blowup_bound) os << "; bound J(0)/(4 y(0)) = " << fmt(*blowup_bound);
    os << "\n";
    os << "  Theorem 2 case " << to_string(thm2.which);
    if (thm2.smallness_ok)
        os << " [smallness " << (*thm2.smallness_ok ? "ok" : "violated") << "]";
    os << " at q = " << fmt(q_used) << ": " << thm2.reason << "\n";
    os << "  Theorem 4 case " << (thm4.which ? std::to_string(thm4.which) : "none");
    if (thm4.which) os << ", predicted l = " << fmt(thm4.predicted_l);
    os << ": " << thm4.reason << "\n";
    if (prop31) {
        os << "  Prop. 3.1";
        if (prop31->verdict != Prop31Verdict::indeterminate) {
            // name the sub-item the verdict came from
            if (prop31->reason.find("b = 0") != std::string::npos)
                os << "(1)";
            else if (prop31->reason.find("alpha <= 1/2") != std::string::npos)
                os << "(i)";
            else if (prop31->reason.find("(N-1)/N and m") != std::string::npos &&
                     prop31->reason.find("alpha >=") != std::string::npos)
                os << "(iii)";
            else
                os << "(ii)";
        }
        os << ": " << to_string(prop31->verdict) << " — " << prop31->reason;
        if (!prop31->side_conditions.empty()) {
            os << " (needs";
            for (const auto& s : prop31->side_conditions) os << " [" << s << "]";
            os << ")";
        }
        os << "\n";
    }
    if (energy0) os << "  E(u0) = " << fmt(*energy0) << "\n";
    if (y0) os << "  y(0) = " << fmt(*y0) << "\n";
    return os.str();
}

std::string ClassificationReport::key_values() const {
    std::ostringstream os;
    os << "N=" << N << "\n";
    os << "k=" << fmt(h.k) << "\n";
    os << "alpha=" << fmt(h.alpha) << "\n";
    os << "a=" << fmt(h.a) << "\n";
    if (h.k1) os << "k1=" << fmt(*h.k1) << "\n";
    os << "q_c=" << fmt(q_c) << "\n";
    os << "q_sup_of_V=" << fmt(q_sup_of_V) << "\n";
    os << "q_used=" << fmt(q_used) << "\n";
    os << "set_membership=" << to_string(set_membership) << "\n";
    os << "c1_holds=" << (c1.holds ? 1 : 0) << "\n";
    os << "c1_threshold_m=" << fmt(c1.threshold_m) << "\n";
    os << "thm1_applicable=" << (thm1_applicable ? 1 : 0) << "\n";
    os << "thm2_case=" << to_string(thm2.which) << "\n";
    if (thm2.smallness_ok) os << "smallness_ok=" << (*thm2.smallness_ok ? 1 : 0) << "\n";
    os << "thm4_case=" << thm4.which << "\n";
    os << "thm4_predicted_l=" << fmt(thm4.predicted_l) << "\n";
    if (prop31) os << "prop31=" << to_string(prop31->verdict) << "\n";
    if (blowup_bound) os << "blowup_bound=" << fmt(*blowup_bound) << "\n";
    if (energy0) os << "energy0=" << fmt(*energy0) << "\n";
    if (y0) os << "y0=" << fmt(*y0) << "\n";
    return os.str();
}

} // namespace qnls
