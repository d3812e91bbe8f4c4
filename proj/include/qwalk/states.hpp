#pragma once

#include <variant>

#include "qwalk/kspace.hpp"
#include "qwalk/matrix.hpp"

namespace qwalk {

/// Normalized two-qubit coin amplitude vector in basis (LL, LR, RL, RR).
struct CoinState {
    CVector amplitudes;  // dim 4, unit norm
};

struct PointMass {
    int x0 = 0;
    int y0 = 0;
};
/// (cos a |−1> + e^{ib} sin a |1>)_x tensor |0>_y
struct TwoSiteSeparable {
    double alpha = 0.0;
    double beta = 0.0;
};
/// cos a |−1,1> + e^{ib} sin a |1,−1>
struct TwoSiteEntangled {
    double alpha = 0.0;
    double beta = 0.0;
};
struct GaussianIsotropic {
    double sigma = 1.0;  // lattice units, > 0
};
/// Symbolic delta weight at k = 0; never evaluated pointwise.
struct UniformLimit {};

using PositionDistribution =
    std::variant<PointMass, TwoSiteSeparable, TwoSiteEntangled, GaussianIsotropic, UniformLimit>;

/// |L> tensor (cos t |L> + e^{ip} sin t |R>): amplitudes (cos t, e^{ip} sin t, 0, 0)
CoinState coin_family_I(double theta, double phi);
/// cos t |L,R> + e^{ip} sin t |R,L>
CoinState coin_family_II(double theta, double phi);
/// cos t |L,L> + e^{ip} sin t |R,R>
CoinState coin_family_III(double theta, double phi);
/// Kronecker product of two one-qubit states (cos t_j |L> + e^{ip_j} sin t_j |R>).
CoinState coin_separable(double theta1, double phi1, double theta2, double phi2);

CoinState bell_psi_plus();
CoinState bell_psi_minus();
CoinState bell_phi_plus();
CoinState bell_phi_minus();

/// Normalized custom amplitudes.
CoinState coin_custom(const CVector& amplitudes);

/// Squared magnitude of the Fourier-transformed initial position amplitudes,
/// |a~(k)|^2. Throws for UniformLimit, which is handled symbolically.
double fourier_weight(const PositionDistribution& pos, const WaveVector& k);

/// Entanglement between the two coin qubits (CCE), in bits.
double coin_coin_entropy(const CoinState& chi);

/// Entanglement between the two spatial coordinates (PPE) of a TwoSiteEntangled
/// position; other variants are an error.
double position_position_entropy(const PositionDistribution& pos);

}  // namespace qwalk
