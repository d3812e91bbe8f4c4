#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "qwalk/linalg.hpp"

using namespace qwalk;

namespace {

std::mt19937_64 rng(12345);

CMatrix random_hermitian(int dim) {
    std::normal_distribution<double> g;
    CMatrix h(dim);
    for (int i = 0; i < dim; ++i) {
        h(i, i) = g(rng);
        for (int j = i + 1; j < dim; ++j) {
            h(i, j) = cplx(g(rng), g(rng));
            h(j, i) = std::conj(h(i, j));
        }
    }
    return h;
}

CMatrix random_unitary(int dim) {
    std::normal_distribution<double> g;
    CMatrix m(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = cplx(g(rng), g(rng));
    for (int j = 0; j < dim; ++j) {
        for (int p = 0; p < j; ++p) {
            cplx dot{};
            for (int i = 0; i < dim; ++i) dot += std::conj(m(i, p)) * m(i, j);
            for (int i = 0; i < dim; ++i) m(i, j) -= dot * m(i, p);
        }
        double n = 0.0;
        for (int i = 0; i < dim; ++i) n += std::norm(m(i, j));
        n = std::sqrt(n);
        for (int i = 0; i < dim; ++i) m(i, j) /= n;
    }
    return m;
}

// det(H - x I) by Gaussian elimination with partial pivoting; real for Hermitian
// H up to round-off, so its sign changes bracket eigenvalues.
double char_poly(const CMatrix& h, double x) {
    const int n = h.dim();
    cplx a[4][4];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = h(i, j) - (i == j ? cplx(x) : cplx{});
    cplx det = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(a[c][j], a[piv][j]);
            det = -det;
        }
        if (std::abs(a[c][c]) == 0.0) return 0.0;
        det *= a[c][c];
        for (int r = c + 1; r < n; ++r) {
            const cplx f = a[r][c] / a[c][c];
            for (int j = c; j < n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    return det.real();
}

// Eigenvalues as roots of the characteristic polynomial, located by bisection
// between sign changes; independent of the Jacobi code under test.
std::vector<double> eigen_by_bisection(const CMatrix& h) {
    double bound = 0.0;
    for (int i = 0; i < h.dim(); ++i) {
        double row = 0.0;
        for (int j = 0; j < h.dim(); ++j) row += std::abs(h(i, j));
        bound = std::max(bound, row);
    }
    bound += 1.0;
    const int samples = 40000;
    std::vector<double> roots;
    double prev_x = -bound, prev_f = char_poly(h, prev_x);
    for (int s = 1; s <= samples; ++s) {
        const double x = -bound + 2.0 * bound * s / samples;
        const double f = char_poly(h, x);
        if ((prev_f < 0.0) != (f < 0.0)) {
            double lo = prev_x, hi = x;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if ((char_poly(h, mid) < 0.0) == (prev_f < 0.0))
                    lo = mid;
                else
                    hi = mid;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_f = f;
    }
    return roots;
}

}  // namespace

TEST_CASE("hermitian_eigen: known 2x2") {
    CMatrix x(2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    const auto r = hermitian_eigen(x);
    CHECK(r.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(r.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("hermitian_eigen: residuals, orthonormality, ordering") {
    for (int t = 0; t < 50; ++t)
        for (int dim : {2, 4}) {
            const CMatrix h = random_hermitian(dim);
            const auto r = hermitian_eigen(h);
            REQUIRE(static_cast<int>(r.eigenvalues.size()) == dim);
            for (int j = 0; j + 1 < dim; ++j)
                CHECK(r.eigenvalues[static_cast<size_t>(j)] <=
                      r.eigenvalues[static_cast<size_t>(j + 1)]);
            CHECK(unitarity_defect(r.eigenvectors) < 1e-12);
            for (int j = 0; j < dim; ++j) {
                CVector v(dim);
                for (int i = 0; i < dim; ++i) v[i] = r.eigenvectors(i, j);
                const CVector hv = h * v;
                double res = 0.0;
                for (int i = 0; i < dim; ++i)
                    res = std::max(res,
                                   std::abs(hv[i] - r.eigenvalues[static_cast<size_t>(j)] * v[i]));
                CHECK(res < 1e-12);
            }
        }
}

TEST_CASE("hermitian_eigen: agrees with characteristic-polynomial bisection") {
    for (int t = 0; t < 10; ++t) {
        const CMatrix h = random_hermitian(4);
        const auto r = hermitian_eigen(h);
        const auto roots = eigen_by_bisection(h);
        REQUIRE(roots.size() == 4);  // distinct with probability 1
        for (size_t j = 0; j < 4; ++j) CHECK(std::fabs(r.eigenvalues[j] - roots[j]) < 1e-9);
    }
}

TEST_CASE("hermitian_eigen: rejects non-Hermitian input") {
    CMatrix m(2);
    m(0, 1) = 1.0;  // m(1,0) stays 0
    CHECK_THROWS_AS(hermitian_eigen(m), std::invalid_argument);
}

TEST_CASE("unitary_eigen: reconstruction and projector algebra") {
    for (int t = 0; t < 50; ++t) {
        const CMatrix u = random_unitary(4);
        const auto sd = unitary_eigen(u);
        CMatrix rec(4), psum(4);
        for (size_t s = 0; s < sd.phases.size(); ++s) {
            CHECK(sd.phases[s] > -3.1415926535897932);
            CHECK(sd.phases[s] <= 3.1415926535897932);
            CHECK(hermiticity_defect(sd.projectors[s]) < 1e-12);
            CHECK((sd.projectors[s] * sd.projectors[s] - sd.projectors[s]).max_abs() < 1e-12);
            rec += std::polar(1.0, sd.phases[s]) * sd.projectors[s];
            psum += sd.projectors[s];
        }
        CHECK((rec - u).max_abs() < 1e-12);
        CHECK((psum - CMatrix::identity(4)).max_abs() < 1e-12);
    }
}

TEST_CASE("unitary_eigen: degenerate spectra cluster into rank->1 projectors") {
    const auto id = unitary_eigen(CMatrix::identity(4));
    REQUIRE(id.phases.size() == 1);
    CHECK(id.phases[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK((id.projectors[0] - CMatrix::identity(4)).max_abs() < 1e-13);

    CMatrix z(4);
    z(0, 0) = 1.0;
    z(1, 1) = 1.0;
    z(2, 2) = -1.0;
    z(3, 3) = -1.0;
    const auto r = unitary_eigen(z);
    REQUIRE(r.phases.size() == 2);
    for (const auto& p : r.projectors)
        CHECK(std::fabs(p.trace().real() - 2.0) < 1e-12);
}

TEST_CASE("von_neumann_entropy: pure, maximally mixed, frozen spectrum") {
    CVector v(4);
    v[0] = cplx(0.6, 0.0);
    v[1] = cplx(0.0, 0.8);
    CHECK(von_neumann_entropy(outer(v, v)) == doctest::Approx(0.0).epsilon(1e-10));

    CHECK(von_neumann_entropy(cplx(0.25, 0.0) * CMatrix::identity(4)) ==
          doctest::Approx(2.0).epsilon(1e-13));

    const double r2 = std::sqrt(2.0);
    CMatrix d(4);
    d(0, 0) = 0.5;
    d(1, 1) = 4.0 * (3.0 - 2.0 * r2) / 8.0;
    d(2, 2) = 4.0 * (r2 - 1.0) / 8.0;
    d(3, 3) = d(2, 2);
    CHECK(von_neumann_entropy(d) == doctest::Approx(1.744858679712936).epsilon(1e-12));
}

TEST_CASE("von_neumann_entropy: basis independence") {
    std::uniform_real_distribution<double> up(0.0, 1.0);
    for (int t = 0; t < 30; ++t) {
        double p[4], s = 0.0;
        for (double& x : p) s += (x = up(rng));
        CMatrix rho(4);
        const CMatrix b = random_unitary(4);
        for (int j = 0; j < 4; ++j) {
            CVector v(4);
            for (int i = 0; i < 4; ++i) v[i] = b(i, j);
            rho += cplx(p[j] / s, 0.0) * outer(v, v);
        }
        const CMatrix w = random_unitary(4);
        CHECK(std::fabs(von_neumann_entropy(rho) - von_neumann_entropy(w * rho * w.adjoint())) <
              1e-10);
    }
}

TEST_CASE("von_neumann_entropy: rejects bad density operators") {
    CHECK_THROWS(von_neumann_entropy(CMatrix::identity(4)));  // trace 4
    CMatrix neg(2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS(von_neumann_entropy(neg));
}

TEST_CASE("binary_entropy") {
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    for (double p : {0.1, 0.25, 0.37, 0.49})
        CHECK(binary_entropy(p) == doctest::Approx(binary_entropy(1.0 - p)).epsilon(1e-14));
}
