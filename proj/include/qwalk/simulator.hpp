#pragma once

#include <utility>
#include <vector>

#include "qwalk/asymptotics.hpp"
#include "qwalk/coin.hpp"
#include "qwalk/states.hpp"

namespace qwalk {

/// Dense amplitude grid f_j(x, y) on x, y in [-R, R], sized by the light cone.
class LatticeState {
public:
    LatticeState(int radius, int step) : radius_(radius), step_(step) {
        const size_t side = static_cast<size_t>(2 * radius + 1);
        amplitudes_.assign(4 * side * side, cplx{});
    }

    int radius() const { return radius_; }
    int step() const { return step_; }
    void set_step(int n) { step_ = n; }

    cplx& at(int j, int x, int y) { return amplitudes_[index(j, x, y)]; }
    const cplx& at(int j, int x, int y) const { return amplitudes_[index(j, x, y)]; }

    double norm_sq() const;

    /// Probability of finding the walker at (x, y), summed over coin components.
    double site_probability(int x, int y) const;

private:
    size_t index(int j, int x, int y) const {
        const size_t side = static_cast<size_t>(2 * radius_ + 1);
        return (static_cast<size_t>(j) * side + static_cast<size_t>(x + radius_)) * side +
               static_cast<size_t>(y + radius_);
    }

    int radius_;
    int step_;
    std::vector<cplx> amplitudes_;
};

/// Product initial state f_j(r) = c_j a(r) on a lattice sized for n_max steps.
/// Finite-support positions only (PointMass, TwoSite*).
LatticeState initialize(const CoinState& chi, const PositionDistribution& pos, int n_max);

/// One step of the walk: coin operation followed by the conditional shift.
LatticeState step(const LatticeState& state, const CoinOperator& coin);

/// rho_c(i,j) = sum_r f_i(r) conj(f_j(r))
ReducedDensity reduced_density(const LatticeState& state);

/// E(n) for n = 0..n_max.
std::vector<std::pair<int, double>> entanglement_trajectory(const CoinState& chi,
                                                            const PositionDistribution& pos,
                                                            const CoinOperator& coin, int n_max);

/// Mean of E(n) over the last `window` steps of a trajectory.
double window_mean(const std::vector<std::pair<int, double>>& traj, int window);

}  // namespace qwalk
