#include "qwalk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qwalk {

namespace {

constexpr double kJacobiOffTol = 1e-14;  // off-diagonal Frobenius norm target
constexpr int kJacobiMaxSweeps = 50;
constexpr double kBlockTol = 1e-8;  // eigenvalue gap below which blocks are merged

double offdiag_frobenius_sq(const CMatrix& h) {
    double s = 0.0;
    for (int i = 0; i < h.dim(); ++i)
        for (int j = 0; j < h.dim(); ++j)
            if (i != j) s += std::norm(h(i, j));
    return s;
}

// One complex Jacobi rotation zeroing h(p,q); accumulates into v.
void jacobi_rotate(CMatrix& h, CMatrix& v, int p, int q) {
    const cplx z = h(p, q);
    const double az = std::abs(z);
    if (az == 0.0) return;
    const cplx u = z / az;
    const double a = h(p, p).real();
    const double b = h(q, q).real();
    const double theta = 0.5 * std::atan2(2.0 * az, a - b);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const cplx us = u * s;  // appears conjugated on the column side

    // Right-multiply h and v by G, with G(p,p)=c, G(p,q)=-s, G(q,p)=conj(u)s, G(q,q)=conj(u)c
    const int n = h.dim();
    for (int i = 0; i < n; ++i) {
        const cplx hip = h(i, p), hiq = h(i, q);
        h(i, p) = hip * c + hiq * std::conj(us);
        h(i, q) = -hip * s + hiq * std::conj(u) * c;
        const cplx vip = v(i, p), viq = v(i, q);
        v(i, p) = vip * c + viq * std::conj(us);
        v(i, q) = -vip * s + viq * std::conj(u) * c;
    }
    // Left-multiply h by G^dag
    for (int j = 0; j < n; ++j) {
        const cplx hpj = h(p, j), hqj = h(q, j);
        h(p, j) = c * hpj + us * hqj;
        h(q, j) = -s * hpj + u * c * hqj;
    }
    h(p, q) = 0.0;
    h(q, p) = 0.0;
}

// Joint diagonalization workhorse: returns eigenvalues/vectors without sorting guarantees fixed up by callers.
void jacobi_diagonalize(CMatrix& h, CMatrix& v) {
    const int n = h.dim();
    v = CMatrix::identity(n);
    for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        if (offdiag_frobenius_sq(h) < kJacobiOffTol * kJacobiOffTol) break;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) jacobi_rotate(h, v, p, q);
    }
}

CVector column(const CMatrix& m, int j) {
    CVector v(m.dim());
    for (int i = 0; i < m.dim(); ++i) v[i] = m(i, j);
    return v;
}

double rayleigh(const CMatrix& h, const CVector& v) { return inner(v, h * v).real(); }

}  // namespace

HermitianEigenResult hermitian_eigen(const CMatrix& h) {
    if (!h.finite()) throw std::invalid_argument("hermitian_eigen: non-finite entries");
    if (hermiticity_defect(h) > 1e-10)
        throw std::invalid_argument("hermitian_eigen: input is not Hermitian within 1e-10");

    CMatrix d = h;
    // Symmetrize so rounding in the input cannot bias the rotations.
    d = 0.5 * (d + d.adjoint());
    CMatrix v(h.dim());
    jacobi_diagonalize(d, v);

    const int n = h.dim();
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return d(a, a).real() < d(b, b).real(); });

    HermitianEigenResult r;
    r.eigenvectors = CMatrix(n);
    for (int j = 0; j < n; ++j) {
        r.eigenvalues.push_back(d(order[static_cast<size_t>(j)], order[static_cast<size_t>(j)]).real());
        for (int i = 0; i < n; ++i) r.eigenvectors(i, j) = v(i, order[static_cast<size_t>(j)]);
    }
    return r;
}

SpectralDecomposition unitary_eigen(const CMatrix& u, double degeneracy_tol) {
    if (!u.finite()) throw std::invalid_argument("unitary_eigen: non-finite entries");
    if (unitarity_defect(u) > 1e-10)
        throw std::invalid_argument("unitary_eigen: input is not unitary within 1e-10");
    const int n = u.dim();

    // U = Hr + i Hi with commuting Hermitian parts; joint eigenbasis gives the phases.
    const CMatrix ud = u.adjoint();
    CMatrix hr = 0.5 * (u + ud);
    CMatrix hi = cplx(0.0, -0.5) * (u - ud);

    CMatrix dr = hr;
    CMatrix v(n);
    jacobi_diagonalize(dr, v);

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return dr(a, a).real() < dr(b, b).real(); });

    // Resolve degenerate blocks of Hr by diagonalizing Hi restricted to each block.
    std::vector<CVector> basis;
    std::vector<double> phase_of;
    size_t start = 0;
    while (start < order.size()) {
        size_t end = start + 1;
        while (end < order.size() &&
               dr(order[end], order[end]).real() - dr(order[end - 1], order[end - 1]).real() < kBlockTol)
            ++end;
        const int r = static_cast<int>(end - start);
        std::vector<CVector> block;
        for (size_t t = start; t < end; ++t) block.push_back(column(v, order[t]));
        if (r > 1) {
            CMatrix a(r);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j)
                    a(i, j) = inner(block[static_cast<size_t>(i)], hi * block[static_cast<size_t>(j)]);
            a = 0.5 * (a + a.adjoint());
            CMatrix av(r);
            jacobi_diagonalize(a, av);
            std::vector<CVector> rotated;
            for (int j = 0; j < r; ++j) {
                CVector w(n);
                for (int i = 0; i < r; ++i)
                    for (int x = 0; x < n; ++x) w[x] += block[static_cast<size_t>(i)][x] * av(i, j);
                rotated.push_back(w);
            }
            block = std::move(rotated);
        }
        for (auto& w : block) {
            const double cosw = rayleigh(hr, w);
            const double sinw = rayleigh(hi, w);
            double ph = std::atan2(sinw, cosw);
            if (ph <= -3.14159265358979323846) ph += 2.0 * 3.14159265358979323846;
            basis.push_back(w);
            phase_of.push_back(ph);
        }
        start = end;
    }

    // Cluster phases (angular, chained) and build one projector per cluster.
    std::vector<int> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return phase_of[static_cast<size_t>(a)] < phase_of[static_cast<size_t>(b)]; });

    auto ang_gap = [](double a, double b) {
        double d = std::fabs(a - b);
        return std::min(d, 2.0 * 3.14159265358979323846 - d);
    };

    std::vector<std::vector<int>> clusters;
    for (int t : idx) {
        if (!clusters.empty() &&
            ang_gap(phase_of[static_cast<size_t>(t)], phase_of[static_cast<size_t>(clusters.back().back())]) <= degeneracy_tol)
            clusters.back().push_back(t);
        else
            clusters.push_back({t});
    }
    // Wrap-around: merge last into first if they touch across +/-pi.
    if (clusters.size() > 1 &&
        ang_gap(phase_of[static_cast<size_t>(clusters.front().front())], phase_of[static_cast<size_t>(clusters.back().back())]) <= degeneracy_tol) {
        for (int t : clusters.back()) clusters.front().push_back(t);
        clusters.pop_back();
    }
    for (const auto& cl : clusters) {
        for (int a : cl)
            for (int b : cl)
                if (ang_gap(phase_of[static_cast<size_t>(a)], phase_of[static_cast<size_t>(b)]) >
                    8.0 * degeneracy_tol)
                    throw std::runtime_error("unitary_eigen: degeneracy tolerance splits a phase cluster inconsistently");
    }

    SpectralDecomposition sd;
    for (const auto& cl : clusters) {
        double sc = 0.0, ss = 0.0;
        CMatrix p(n);
        for (int t : cl) {
            sc += std::cos(phase_of[static_cast<size_t>(t)]);
            ss += std::sin(phase_of[static_cast<size_t>(t)]);
            p += outer(basis[static_cast<size_t>(t)], basis[static_cast<size_t>(t)]);
        }
        double ph = std::atan2(ss, sc);
        if (ph <= -3.14159265358979323846) ph += 2.0 * 3.14159265358979323846;
        sd.phases.push_back(ph);
        sd.projectors.push_back(p);
    }
    return sd;
}

double binary_entropy(double p) {
    double e = 0.0;
    if (p > 0.0 && p < 1.0) e = -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
    return e;
}

double von_neumann_entropy(const CMatrix& rho, double eig_floor) {
    if (std::fabs(rho.trace().real() - 1.0) > 1e-8 || std::fabs(rho.trace().imag()) > 1e-8)
        throw std::invalid_argument("von_neumann_entropy: trace is not 1 within 1e-8");
    const auto eig = hermitian_eigen(rho);
    double e = 0.0;
    for (double lam : eig.eigenvalues) {
        if (lam < -1e-10)
            throw std::invalid_argument("von_neumann_entropy: negative eigenvalue beyond tolerance");
        if (lam < eig_floor) continue;  // 0 log 0 = 0
        e -= lam * std::log2(lam);
    }
    const double emax = std::log2(static_cast<double>(rho.dim()));
    return std::clamp(e, 0.0, emax);
}

}  // namespace qwalk
