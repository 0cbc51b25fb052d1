#include "qnls/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace qnls {

RadialGrid::RadialGrid(int dim, double radius, int points)
    : dim_(dim), radius_(radius) {
    if (dim < 3) throw std::invalid_argument("RadialGrid: dim must be >= 3");
    if (!(radius > 0.0)) throw std::invalid_argument("RadialGrid: radius must be > 0");
    if (points < 16) throw std::invalid_argument("RadialGrid: need at least 16 points");
    dr_ = radius / points;
    surface_ = 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim);
    nodes_.resize(points);
    weights_.resize(points);
    for (int j = 0; j < points; ++j) {
        nodes_[j] = (j + 0.5) * dr_;
        weights_[j] = surface_ * std::pow(nodes_[j], dim - 1) * dr_;
    }
}

double integrate(const std::vector<double>& f, const RadialGrid& grid) {
    if (static_cast<int>(f.size()) != grid.size())
        throw std::invalid_argument("integrate: sample count does not match grid");
    double acc = 0.0;
    for (int j = 0; j < grid.size(); ++j) acc += f[j] * grid.weight(j);
    return acc;
}

std::vector<double> radial_gradient(const std::vector<double>& f,
                                    const RadialGrid& grid) {
    const int M = grid.size();
    if (static_cast<int>(f.size()) != M)
        throw std::invalid_argument("radial_gradient: sample count does not match grid");
    std::vector<double> g(M);
    const double dr = grid.dr();
    // even reflection across r = 0: ghost at -dr/2 carries f[0]
    g[0] = (f[1] - f[0]) / (2.0 * dr);
    for (int j = 1; j < M - 1; ++j) g[j] = (f[j + 1] - f[j - 1]) / (2.0 * dr);
    g[M - 1] = (f[M - 1] - f[M - 2]) / dr;
    return g;
}

LaplacianStencil make_laplacian(const RadialGrid& grid) {
    const int M = grid.size();
    const double dr = grid.dr();
    const int N = grid.dim();
    LaplacianStencil st;
    st.lower.assign(M, 0.0);
    st.diag.assign(M, 0.0);
    st.upper.assign(M, 0.0);
    // face areas r_{j+1/2}^{N-1}; the r = 0 face carries no flux
    for (int j = 0; j < M; ++j) {
        const double r = grid.node(j);
        const double face_lo = (j == 0) ? 0.0 : std::pow(j * dr, N - 1);
        const double face_hi = std::pow((j + 1) * dr, N - 1);
        const double scale = 1.0 / (std::pow(r, N - 1) * dr * dr);
        if (j > 0) st.lower[j] = face_lo * scale;
        if (j < M - 1) st.upper[j] = face_hi * scale;
        // outermost face keeps its flux against the zero ghost value
        st.diag[j] = -(face_lo + face_hi) * scale;
    }
    return st;
}

namespace {

template <typename T>
std::vector<T> apply_stencil(const LaplacianStencil& st, const std::vector<T>& f) {
    const std::size_t M = st.diag.size();
    if (f.size() != M)
        throw std::invalid_argument("laplacian: sample count does not match stencil");
    std::vector<T> out(M);
    for (std::size_t j = 0; j < M; ++j) {
        T acc = st.diag[j] * f[j];
        if (j > 0) acc += st.lower[j] * f[j - 1];
        if (j + 1 < M) acc += st.upper[j] * f[j + 1];
        out[j] = acc;
    }
    return out;
}

} // namespace

std::vector<double> LaplacianStencil::apply(const std::vector<double>& f) const {
    return apply_stencil(*this, f);
}

std::vector<complexd> LaplacianStencil::apply(const std::vector<complexd>& f) const {
    return apply_stencil(*this, f);
}

std::vector<double> radial_laplacian(const std::vector<double>& f,
                                     const RadialGrid& grid) {
    return make_laplacian(grid).apply(f);
}

bool FieldState::boundary_contaminated() const {
    double peak = 0.0;
    for (const auto& v : values) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return false;
    return std::abs(values.back()) > 1e-6 * peak;
}

FieldState make_initial_state(const ProblemSpec& spec, const RadialGrid& grid) {
    FieldState state{grid, 0.0, {}};
    const auto& u0 = spec.u0;
    if (u0.tabulated) {
        if (static_cast<int>(u0.tabulated->size()) != grid.size())
            throw std::invalid_argument("tabulated u0 does not match the grid");
        state.values = *u0.tabulated;
        return state;
    }
    state.values.resize(grid.size());
    for (int j = 0; j < grid.size(); ++j) {
        const double r = grid.node(j);
        const double amp = u0.amplitude * std::exp(-r * r / (2.0 * u0.sigma * u0.sigma));
        state.values[j] = std::polar(amp, u0.chirp * r * r);
    }
    return state;
}

} // namespace qnls
