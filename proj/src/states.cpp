#include "qwalk/states.hpp"

#include <cmath>
#include <stdexcept>

#include "qwalk/linalg.hpp"

namespace qwalk {

namespace {
constexpr double kPi = 3.14159265358979323846;

CoinState make_state(cplx c1, cplx c2, cplx c3, cplx c4) {
    CVector v(4);
    v[0] = c1;
    v[1] = c2;
    v[2] = c3;
    v[3] = c4;
    return {v};
}
}  // namespace

CoinState coin_family_I(double theta, double phi) {
    return make_state(std::cos(theta), std::polar(std::sin(theta), phi), 0.0, 0.0);
}

CoinState coin_family_II(double theta, double phi) {
    return make_state(0.0, std::cos(theta), std::polar(std::sin(theta), phi), 0.0);
}

CoinState coin_family_III(double theta, double phi) {
    return make_state(std::cos(theta), 0.0, 0.0, std::polar(std::sin(theta), phi));
}

CoinState coin_separable(double theta1, double phi1, double theta2, double phi2) {
    const cplx a0 = std::cos(theta1), a1 = std::polar(std::sin(theta1), phi1);
    const cplx b0 = std::cos(theta2), b1 = std::polar(std::sin(theta2), phi2);
    return make_state(a0 * b0, a0 * b1, a1 * b0, a1 * b1);
}

CoinState bell_psi_plus() { return coin_family_II(kPi / 4.0, 0.0); }
CoinState bell_psi_minus() { return coin_family_II(-kPi / 4.0, 0.0); }
CoinState bell_phi_plus() { return coin_family_III(kPi / 4.0, 0.0); }
CoinState bell_phi_minus() { return coin_family_III(-kPi / 4.0, 0.0); }

CoinState coin_custom(const CVector& amplitudes) {
    if (amplitudes.dim() != 4) throw std::invalid_argument("coin_custom: need 4 amplitudes");
    const double n = amplitudes.norm();
    if (n < 1e-12) throw std::invalid_argument("coin_custom: zero state");
    CVector v = amplitudes;
    v *= cplx(1.0 / n, 0.0);
    return {v};
}

double fourier_weight(const PositionDistribution& pos, const WaveVector& k) {
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                (void)p;
                return 1.0;
            } else if constexpr (std::is_same_v<T, TwoSiteSeparable>) {
                return 1.0 + std::sin(2.0 * p.alpha) * std::cos(2.0 * k.kx + p.beta);
            } else if constexpr (std::is_same_v<T, TwoSiteEntangled>) {
                return 1.0 + std::sin(2.0 * p.alpha) * std::cos(2.0 * (k.kx - k.ky) + p.beta);
            } else if constexpr (std::is_same_v<T, GaussianIsotropic>) {
                if (p.sigma <= 0.0) throw std::invalid_argument("fourier_weight: sigma must be > 0");
                // normalized so the torus integral of the weight over d^2k/(4 pi^2) is 1
                const double i1 = std::sqrt(kPi) / p.sigma * std::erf(kPi * p.sigma);
                const double norm = 4.0 * kPi * kPi / (i1 * i1);
                return norm * std::exp(-(k.kx * k.kx + k.ky * k.ky) * p.sigma * p.sigma);
            } else {
                throw std::invalid_argument(
                    "fourier_weight: UniformLimit has no pointwise weight; use the uniform-limit path");
            }
        },
        pos);
}

double coin_coin_entropy(const CoinState& chi) {
    // reduced one-qubit state from tracing out the second qubit
    const CVector& c = chi.amplitudes;
    CMatrix r(2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r(i, j) = c[2 * i] * std::conj(c[2 * j]) + c[2 * i + 1] * std::conj(c[2 * j + 1]);
    return von_neumann_entropy(r);
}

double position_position_entropy(const PositionDistribution& pos) {
    const auto* p = std::get_if<TwoSiteEntangled>(&pos);
    if (!p)
        throw std::invalid_argument("position_position_entropy: defined for TwoSiteEntangled only");
    const double c = std::cos(p->alpha);
    return binary_entropy(c * c);
}

}  // namespace qwalk
