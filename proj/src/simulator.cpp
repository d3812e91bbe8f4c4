#include "qwalk/simulator.hpp"

#include <cmath>
#include <stdexcept>

#include "qwalk/linalg.hpp"

namespace qwalk {

namespace {

struct SiteAmplitude {
    int x;
    int y;
    cplx a;
};

// Finite-support amplitude list; Gaussian/UniformLimit are not truncatable here.
std::vector<SiteAmplitude> support_of(const PositionDistribution& pos) {
    if (const auto* p = std::get_if<PointMass>(&pos)) return {{p->x0, p->y0, 1.0}};
    if (const auto* s = std::get_if<TwoSiteSeparable>(&pos))
        return {{-1, 0, std::cos(s->alpha)}, {1, 0, std::polar(std::sin(s->alpha), s->beta)}};
    if (const auto* e = std::get_if<TwoSiteEntangled>(&pos))
        return {{-1, 1, std::cos(e->alpha)}, {1, -1, std::polar(std::sin(e->alpha), e->beta)}};
    throw std::invalid_argument("simulator: initial position must have finite support");
}

}  // namespace

double LatticeState::norm_sq() const {
    double s = 0.0;
    for (const auto& a : amplitudes_) s += std::norm(a);
    return s;
}

double LatticeState::site_probability(int x, int y) const {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += std::norm(at(j, x, y));
    return s;
}

LatticeState initialize(const CoinState& chi, const PositionDistribution& pos, int n_max) {
    if (n_max < 1) throw std::invalid_argument("initialize: n_max must be >= 1");
    const auto sites = support_of(pos);
    int support = 0;
    for (const auto& s : sites) support = std::max({support, std::abs(s.x), std::abs(s.y)});

    LatticeState st(support + n_max, 0);
    for (const auto& s : sites)
        for (int j = 0; j < 4; ++j) st.at(j, s.x, s.y) = chi.amplitudes[j] * s.a;
    return st;
}

LatticeState step(const LatticeState& state, const CoinOperator& coin) {
    if (coin.matrix.dim() != 4) throw std::invalid_argument("step: coin must be 4x4");
    const int r = state.radius();
    // The shift grows the support by one site per step; refuse to run off-grid.
    for (int t = -r; t <= r; ++t)
        if (state.site_probability(t, -r) > 0.0 || state.site_probability(t, r) > 0.0 ||
            state.site_probability(-r, t) > 0.0 || state.site_probability(r, t) > 0.0)
            throw std::runtime_error("step: light cone would exceed the lattice");

    const CMatrix& c = coin.matrix;
    LatticeState out(r, state.step() + 1);
    // Component i at (x,y) arrives from the neighbor opposite to its shift direction.
    static const int dx[4] = {1, 0, 0, -1};
    static const int dy[4] = {0, -1, 1, 0};
    for (int x = -r; x <= r; ++x)
        for (int y = -r; y <= r; ++y)
            for (int i = 0; i < 4; ++i) {
                const int nx = x + dx[i], ny = y + dy[i];
                if (nx < -r || nx > r || ny < -r || ny > r) continue;
                cplx s{};
                for (int j = 0; j < 4; ++j) s += c(i, j) * state.at(j, nx, ny);
                out.at(i, x, y) = s;
            }
    return out;
}

ReducedDensity reduced_density(const LatticeState& state) {
    const int r = state.radius();
    CMatrix rho(4);
    for (int x = -r; x <= r; ++x)
        for (int y = -r; y <= r; ++y)
            for (int i = 0; i < 4; ++i) {
                const cplx fi = state.at(i, x, y);
                if (fi == cplx{}) continue;
                for (int j = 0; j < 4; ++j) rho(i, j) += fi * std::conj(state.at(j, x, y));
            }
    QuadratureRecord rec;
    rec.converged = true;
    return {rho, "", "lattice", std::move(rec)};
}

std::vector<std::pair<int, double>> entanglement_trajectory(const CoinState& chi,
                                                            const PositionDistribution& pos,
                                                            const CoinOperator& coin, int n_max) {
    LatticeState st = initialize(chi, pos, std::max(1, n_max));
    std::vector<std::pair<int, double>> traj;
    traj.emplace_back(0, von_neumann_entropy(reduced_density(st).matrix));
    for (int n = 1; n <= n_max; ++n) {
        st = step(st, coin);
        traj.emplace_back(n, von_neumann_entropy(reduced_density(st).matrix));
    }
    return traj;
}

double window_mean(const std::vector<std::pair<int, double>>& traj, int window) {
    if (traj.empty()) throw std::invalid_argument("window_mean: empty trajectory");
    const size_t take = std::min(traj.size(), static_cast<size_t>(window + 1));
    double s = 0.0;
    for (size_t t = traj.size() - take; t < traj.size(); ++t) s += traj[t].second;
    return s / static_cast<double>(take);
}

}  // namespace qwalk
