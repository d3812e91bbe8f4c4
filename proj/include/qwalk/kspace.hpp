#pragma once

#include "qwalk/coin.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/matrix.hpp"

namespace qwalk {

struct WaveVector {
    double kx = 0.0;  // radians, in [-pi, pi]
    double ky = 0.0;
};

/// Closed-form spectrum of the Hadamard-tensor-Hadamard walk operator:
/// phase set {+-omega_plus, +-omega_minus}.
struct HadamardSpectrumClosedForm {
    double omega_plus = 0.0;   // in [0, pi]
    double omega_minus = 0.0;  // in [0, pi]
    double delta_k = 0.0;      // in [4, 16]
};

struct DegeneratePointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One-step operator in the Fourier representation:
/// row i of U_k = (phase factor for shift direction i) x row i of U_C,
/// with phases (e^{-i kx}, e^{i ky}, e^{-i ky}, e^{i kx}).
CMatrix build_uk(const CoinOperator& coin, const WaveVector& k);

/// cos(omega+-) = (cos kx - cos ky +- sqrt(Delta_k))/4,
/// Delta_k = cos^2 kx + 6 cos kx cos ky + cos^2 ky + 8.
HadamardSpectrumClosedForm hadamard_closed_spectrum(const WaveVector& k);

/// Normalized closed-form eigenvector of U_k for the Hadamard coin at a
/// nondegenerate k. Throws DegeneratePointError when the formula collapses
/// (normalization below 1e-12); callers fall back to unitary_eigen projectors.
CVector hadamard_closed_eigenvector(const WaveVector& k, double omega);

}  // namespace qwalk
