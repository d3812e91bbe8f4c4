#include <cmath>
#include <random>

#include "doctest.h"
#include "qwalk/coin.hpp"

using namespace qwalk;

namespace {
std::mt19937_64 rng(777);
}

TEST_CASE("hadamard2") {
    const auto h = hadamard2();
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(h.label == "hadamard");
    CHECK(std::abs(h.matrix(0, 0) - cplx(s, 0)) < 1e-15);
    CHECK(std::abs(h.matrix(0, 1) - cplx(s, 0)) < 1e-15);
    CHECK(std::abs(h.matrix(1, 0) - cplx(s, 0)) < 1e-15);
    CHECK(std::abs(h.matrix(1, 1) + cplx(s, 0)) < 1e-15);
    CHECK(unitarity_defect(h.matrix) < 1e-15);
}

TEST_CASE("tensor: explicit Hadamard product and labels") {
    const auto hh = tensor(hadamard2(), hadamard2());
    CHECK(hh.label == "hadamardxhadamard");
    CHECK(hh.matrix.dim() == 4);
    CHECK(unitarity_defect(hh.matrix) < 1e-14);
    // every entry is +-1/2; sign pattern (-1)^{bit overlap}
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const int sign = ((i >> 1) & (j >> 1)) ^ (i & j & 1) ? -1 : 1;
            CHECK(std::abs(hh.matrix(i, j) - cplx(0.5 * sign, 0.0)) < 1e-15);
        }
}

TEST_CASE("tensor: acts as A x B on product vectors") {
    std::normal_distribution<double> g;
    for (int t = 0; t < 50; ++t) {
        CMatrix a(2), b(2);
        // random unitaries from Gram-Schmidt of Gaussian columns
        for (CMatrix* m : {&a, &b}) {
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) (*m)(i, j) = cplx(g(rng), g(rng));
            cplx d{};
            double n0 = 0.0;
            for (int i = 0; i < 2; ++i) n0 += std::norm((*m)(i, 0));
            n0 = std::sqrt(n0);
            for (int i = 0; i < 2; ++i) (*m)(i, 0) /= n0;
            for (int i = 0; i < 2; ++i) d += std::conj((*m)(i, 0)) * (*m)(i, 1);
            for (int i = 0; i < 2; ++i) (*m)(i, 1) -= d * (*m)(i, 0);
            double n1 = 0.0;
            for (int i = 0; i < 2; ++i) n1 += std::norm((*m)(i, 1));
            n1 = std::sqrt(n1);
            for (int i = 0; i < 2; ++i) (*m)(i, 1) /= n1;
        }
        const auto ab = tensor(custom(a, "a"), custom(b, "b"));
        CVector u(2), v(2);
        for (int i = 0; i < 2; ++i) {
            u[i] = cplx(g(rng), g(rng));
            v[i] = cplx(g(rng), g(rng));
        }
        CVector uv(4);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) uv[2 * i + j] = u[i] * v[j];
        const CVector lhs = ab.matrix * uv;
        const CVector au = a * u, bv = b * v;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(std::abs(lhs[2 * i + j] - au[i] * bv[j]) < 1e-13);
    }
}

TEST_CASE("grover4") {
    const auto gr = grover4();
    CHECK(gr.label == "grover");
    CHECK(unitarity_defect(gr.matrix) < 1e-15);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs(gr.matrix(i, j) - cplx(i == j ? -0.5 : 0.5, 0.0)) < 1e-15);
    // reflection about the uniform vector: G = 2|s><s| - I, so G^2 = I
    CHECK((gr.matrix * gr.matrix - CMatrix::identity(4)).max_abs() < 1e-15);
}

TEST_CASE("dft4") {
    const auto d = dft4();
    CHECK(d.label == "dft");
    CHECK(unitarity_defect(d.matrix) < 1e-15);
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
            const int e = (j * k) % 4;
            const cplx w = e == 0 ? cplx(1, 0) : e == 1 ? cplx(0, 1) : e == 2 ? cplx(-1, 0)
                                                                              : cplx(0, -1);
            CHECK(std::abs(d.matrix(j, k) - 0.5 * w) < 1e-15);
        }
    const CMatrix d2 = d.matrix * d.matrix;
    CHECK((d2 * d2 - CMatrix::identity(4)).max_abs() < 1e-14);
}

TEST_CASE("custom: validates unitarity") {
    CHECK_NOTHROW(custom(grover4().matrix, "g"));
    CMatrix bad = CMatrix::identity(4);
    bad(0, 0) = 1.001;
    CHECK_THROWS_AS(custom(bad, "bad"), std::invalid_argument);
}
