#include "qnls/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qnls {

namespace {

// s^a for s >= 0 with fast paths for the exponents the hot loops use.
double pow_pos(double s, double a) {
    if (a == 1.0) return s;
    if (a == 0.5) return std::sqrt(s);
    if (a == 2.0) return s * s;
    if (a == 1.5) return s * std::sqrt(s);
    if (a == 0.75) return std::sqrt(s * std::sqrt(s));
    if (a == 0.25) return std::sqrt(std::sqrt(s));
    return std::pow(s, a);
}

} // namespace

NonlinearitySpec::NonlinearitySpec(std::vector<HTerm> terms)
    : terms_(std::move(terms)) {
    for (const auto& t : terms_) {
        if (!(t.b >= 0.0))
            throw std::invalid_argument("nonlinearity coefficients must be >= 0");
        if (!(t.alpha > 0.0))
            throw std::invalid_argument("nonlinearity exponents must be > 0");
    }
    std::sort(terms_.begin(), terms_.end(),
              [](const HTerm& a, const HTerm& b) { return a.alpha < b.alpha; });
    // merge equal exponents, drop zero coefficients
    std::vector<HTerm> merged;
    for (const auto& t : terms_) {
        if (t.b == 0.0) continue;
        if (!merged.empty() && merged.back().alpha == t.alpha)
            merged.back().b += t.b;
        else
            merged.push_back(t);
    }
    terms_ = std::move(merged);
}

HEval eval_h(const NonlinearitySpec& h, double s) {
    if (s < 0.0) throw std::domain_error("eval_h: s must be >= 0");
    HEval out{0.0, 0.0, 0.0};
    const double sd = std::max(s, kSFloor); // floor for negative powers only
    for (const auto& t : h.terms()) {
        out.h += t.b * pow_pos(s, t.alpha);
        const double pd = pow_pos(sd, t.alpha);
        out.hp += t.b * t.alpha * pd / sd;
        out.hpp += t.b * t.alpha * (t.alpha - 1.0) * pd / (sd * sd);
    }
    return out;
}

void PotentialSpec::validate() const {
    if (!(c >= 0.0)) throw std::invalid_argument("V.c must be >= 0");
    if (!(m >= 0.0)) throw std::invalid_argument("V.m must be >= 0");
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("V.sign must be +1 or -1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("V.epsilon must be > 0");
}

VEval eval_V(const PotentialSpec& V, double r) {
    VEval out{V.v_bounded, 0.0};
    if (V.c != 0.0 && V.m > 0.0) {
        if (r >= V.epsilon) {
            const double sing = V.sign * V.c * std::pow(r, -V.m);
            out.V += sing;
            out.xdV = -V.m * sing;
        } else {
            out.V += V.sign * V.c * std::pow(V.epsilon, -V.m);
        }
    } else if (V.c != 0.0) {
        out.V += V.sign * V.c; // m == 0: constant contribution
    }
    return out;
}

void InitialDataSpec::validate() const {
    if (tabulated) return;
    if (!(amplitude > 0.0))
        throw std::invalid_argument("u0.amplitude must be > 0");
    if (!(sigma > 0.0)) throw std::invalid_argument("u0.sigma must be > 0");
}

void ProblemSpec::validate() const {
    if (dim < 3) throw std::invalid_argument("dim must be >= 3");
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be > 0");
    if (grid_points < 16)
        throw std::invalid_argument("grid_points must be >= 16");
    if (!(dt0 > 0.0)) throw std::invalid_argument("dt0 must be > 0");
    if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
    V.validate();
    u0.validate();
}

} // namespace qnls
