#include "qwalk/kspace.hpp"

#include <algorithm>
#include <cmath>

namespace qwalk {

namespace {
constexpr double kPi = 3.14159265358979323846;

double angular_distance(double a, double b) {
    double d = std::fmod(std::fabs(a - b), 2.0 * kPi);
    return std::min(d, 2.0 * kPi - d);
}
}  // namespace

CMatrix build_uk(const CoinOperator& coin, const WaveVector& k) {
    if (coin.matrix.dim() != 4) throw std::invalid_argument("build_uk: coin must be 4x4");
    if (std::fabs(k.kx) > kPi || std::fabs(k.ky) > kPi)
        throw std::invalid_argument("build_uk: wave vector components must be in [-pi, pi]");
    const cplx phases[4] = {std::polar(1.0, -k.kx), std::polar(1.0, k.ky),
                            std::polar(1.0, -k.ky), std::polar(1.0, k.kx)};
    CMatrix u(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) u(i, j) = phases[i] * coin.matrix(i, j);
    return u;
}

HadamardSpectrumClosedForm hadamard_closed_spectrum(const WaveVector& k) {
    const double ckx = std::cos(k.kx);
    const double cky = std::cos(k.ky);
    HadamardSpectrumClosedForm r;
    r.delta_k = ckx * ckx + 6.0 * ckx * cky + cky * cky + 8.0;
    const double root = std::sqrt(r.delta_k);
    r.omega_plus = std::acos(std::clamp((ckx - cky + root) / 4.0, -1.0, 1.0));
    r.omega_minus = std::acos(std::clamp((ckx - cky - root) / 4.0, -1.0, 1.0));
    return r;
}

CVector hadamard_closed_eigenvector(const WaveVector& k, double omega) {
    const auto sp = hadamard_closed_spectrum(k);
    const double match = std::min(
        std::min(angular_distance(omega, sp.omega_plus), angular_distance(omega, -sp.omega_plus)),
        std::min(angular_distance(omega, sp.omega_minus), angular_distance(omega, -sp.omega_minus)));
    if (match > 1e-9)
        throw std::invalid_argument("hadamard_closed_eigenvector: omega is not an eigenphase at this k");

    const cplx e1 = std::polar(1.0, omega);
    const cplx e2 = e1 * e1;
    const cplx e3 = e2 * e1;
    const cplx px = std::polar(1.0, k.kx);
    const cplx py = std::polar(1.0, k.ky);

    CVector v(4);
    v[0] = 1.0 - e2;
    v[1] = -1.0 + e1 * (px - py) + e2 * px * py;
    v[2] = -1.0 + e1 * (px - std::conj(py)) + e2 * px * std::conj(py);
    v[3] = 1.0 + e1 * (py + std::conj(py)) +
           e2 * (1.0 - px * py - px * std::conj(py)) - 2.0 * e3 * px;

    const double n = v.norm();
    if (n < 1e-12)
        throw DegeneratePointError("hadamard_closed_eigenvector: normalization collapses at a degenerate k-point");
    v *= cplx(1.0 / n, 0.0);
    return v;
}

}  // namespace qwalk
