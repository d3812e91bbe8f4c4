#include <cmath>
#include <random>

#include "doctest.h"
#include "qwalk/asymptotics.hpp"
#include "qwalk/kspace.hpp"

using namespace qwalk;

namespace {
constexpr double kPi = 3.14159265358979323846;

CoinState chi_ll() { return coin_family_III(0.0, 0.0); }

QuadratureSpec coarse(int m) {
    QuadratureSpec q;
    q.grid_points_per_axis = m;
    q.max_refinements = 0;
    return q;
}
}  // namespace

TEST_CASE("pointwise_p_matrix: unit-trace PSD sandwich") {
    const auto hh = tensor(hadamard2(), hadamard2());
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ukk(-kPi, kPi);
    for (int t = 0; t < 20; ++t) {
        const WaveVector k{ukk(rng), ukk(rng)};
        const auto sd = unitary_eigen(build_uk(hh, k));
        const CMatrix p = pointwise_p_matrix(sd, bell_psi_plus());
        CHECK(hermiticity_defect(p) < 1e-12);
        CHECK(std::fabs(p.trace().real() - 1.0) < 1e-12);
        CHECK(hermitian_eigen(p).eigenvalues.front() > -1e-12);
        // sandwich form: reapplying the projectors is idempotent
        CMatrix again(4);
        for (const auto& pr : sd.projectors) again += pr * p * pr;
        CHECK((again - p).max_abs() < 1e-12);
    }
}

TEST_CASE("localized cases reproduce the frozen spectral-quadrature values") {
    const auto hh = tensor(hadamard2(), hadamard2());
    // spectral accuracy: a 64-point grid already sits at machine precision
    const auto rep = asymptotic_entanglement(hh, chi_ll(), PointMass{}, coarse(64));
    CHECK(rep.entropy == doctest::Approx(1.744858679713).epsilon(1e-9));
    CHECK(asymptotic_entanglement(hh, bell_psi_plus(), PointMass{}, coarse(64)).entropy ==
          doctest::Approx(1.978660084350).epsilon(1e-9));
    CHECK(asymptotic_entanglement(hh, bell_psi_minus(), PointMass{}, coarse(64)).entropy ==
          doctest::Approx(1.889032112688).epsilon(1e-9));
}

TEST_CASE("closed-form density constants for the localized |LL> start") {
    const auto hh = tensor(hadamard2(), hadamard2());
    const auto rho = asymptotic_reduced_density(hh, chi_ll(), PointMass{}, coarse(128)).matrix;
    const double r2 = std::sqrt(2.0);
    const double c[6] = {(9.0 - 4.0 * r2) / 8.0, (5.0 - 3.0 * r2) / 8.0, (3.0 - 2.0 * r2) / 8.0,
                         (2.0 * r2 - 1.0) / 8.0, (r2 - 1.0) / 8.0, 0.125};
    const double want[4][4] = {{c[0], c[1], c[1], c[2]},
                               {c[1], c[3], c[2], c[4]},
                               {c[1], c[2], c[3], c[4]},
                               {c[2], c[4], c[4], c[5]}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs(rho(i, j) - cplx(want[i][j], 0.0)) < 1e-10);
}

TEST_CASE("refinement history and convergence flag") {
    const auto hh = tensor(hadamard2(), hadamard2());
    QuadratureSpec q;
    q.grid_points_per_axis = 32;
    q.refine_tol = 1e-10;
    q.max_refinements = 3;
    const auto rep = asymptotic_entanglement(hh, bell_psi_plus(), PointMass{}, q);
    CHECK(rep.converged);
    CHECK(rep.density.quadrature.final_grid >= 64);
    CHECK(!rep.density.quadrature.history.empty());
    CHECK(rep.density.quadrature.history.back().second <= 1e-10);
}

TEST_CASE("flat-band coin: quadrature converges only algebraically") {
    // The Grover walk carries constant eigenphase branches, so doubling the
    // grid changes entries at the 1e-4 level and the default 1e-8 target is
    // out of reach.
    QuadratureSpec strict;
    strict.grid_points_per_axis = 32;
    strict.refine_tol = 1e-10;
    strict.max_refinements = 1;
    CHECK_THROWS_AS(
        asymptotic_reduced_density(grover4(), bell_psi_plus(), PointMass{}, strict),
        QuadratureNonConvergence);
    try {
        asymptotic_reduced_density(grover4(), bell_psi_plus(), PointMass{}, strict);
    } catch (const QuadratureNonConvergence& e) {
        CHECK(!e.history.empty());
        CHECK(e.history.back().second > 1e-10);
    }

    QuadratureSpec loose;
    loose.grid_points_per_axis = 512;
    loose.refine_tol = 1e-3;
    loose.max_refinements = 1;
    const auto rep = asymptotic_entanglement(grover4(), chi_ll(), PointMass{}, loose);
    CHECK(rep.converged);
    CHECK(rep.entropy == doctest::Approx(1.855473).epsilon(2e-3));
}

TEST_CASE("quadrature spec validation") {
    const auto hh = tensor(hadamard2(), hadamard2());
    QuadratureSpec q;
    q.grid_points_per_axis = 48;  // not a power of two
    CHECK_THROWS_AS(asymptotic_reduced_density(hh, chi_ll(), PointMass{}, q),
                    std::invalid_argument);
    q = QuadratureSpec{};
    q.offset_fraction = 1.0;
    CHECK_THROWS_AS(asymptotic_reduced_density(hh, chi_ll(), PointMass{}, q),
                    std::invalid_argument);
}

TEST_CASE("point-mass densities are translation invariant") {
    const auto hh = tensor(hadamard2(), hadamard2());
    const auto a = asymptotic_reduced_density(hh, bell_psi_minus(), PointMass{0, 0}, coarse(64));
    const auto b = asymptotic_reduced_density(hh, bell_psi_minus(), PointMass{-4, 9}, coarse(64));
    CHECK((a.matrix - b.matrix).max_abs() < 1e-13);
}

TEST_CASE("two-site inputs reproduce the frozen non-local values") {
    const auto hh = tensor(hadamard2(), hadamard2());
    CHECK(asymptotic_entanglement(hh, bell_psi_plus(), TwoSiteSeparable{kPi / 4.0, 0.7},
                                  coarse(128))
              .entropy == doctest::Approx(1.962224794530).epsilon(1e-8));
    CHECK(asymptotic_entanglement(hh, bell_psi_plus(), TwoSiteEntangled{0.6, 0.7}, coarse(128))
              .entropy == doctest::Approx(1.975396248657).epsilon(1e-8));
}

TEST_CASE("gaussian packets interpolate between localized and uniform limits") {
    const auto hh = tensor(hadamard2(), hadamard2());
    const double e_local =
        asymptotic_entanglement(hh, bell_psi_minus(), PointMass{}, coarse(128)).entropy;
    const double e_narrow =
        asymptotic_entanglement(hh, bell_psi_minus(), GaussianIsotropic{0.05}, coarse(128))
            .entropy;
    const double e_wide =
        asymptotic_entanglement(hh, bell_psi_minus(), GaussianIsotropic{40.0}, coarse(1024))
            .entropy;
    const double e_uniform = asymptotic_entanglement(hh, bell_psi_minus(), UniformLimit{}).entropy;
    // sigma -> 0 recovers the localized start; very wide packets concentrate
    // the weight near k = 0 and land near the uniform-limit value (the finite
    // packet averages over directions, so agreement is approximate)
    CHECK(std::fabs(e_narrow - e_local) < 0.01);
    CHECK(e_wide < e_local);
    CHECK(std::fabs(e_wide - e_uniform) < 0.1);
}

TEST_CASE("uniform limit dispatch") {
    const auto hh = tensor(hadamard2(), hadamard2());
    CHECK(asymptotic_entanglement(hh, bell_psi_plus(), UniformLimit{}).entropy ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(asymptotic_entanglement(hh, bell_psi_minus(), UniformLimit{}).entropy ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(asymptotic_entanglement(hh, coin_family_II(0.0, 0.0), UniformLimit{}).entropy ==
          doctest::Approx(1.201752073446).epsilon(1e-6));
    const auto rd = uniform_limit_reduced_density(hh, bell_phi_plus());
    CHECK(std::fabs(rd.matrix.trace().real() - 1.0) < 1e-12);
    CHECK(hermiticity_defect(rd.matrix) < 1e-12);
}

TEST_CASE("1D closed form and additivity") {
    CHECK(oned_closed_form_cpe(0.0, 0.0) == doctest::Approx(0.872429339856).epsilon(1e-10));
    CHECK(oned_closed_form_cpe(0.0, 1.7) == doctest::Approx(0.872429339856).epsilon(1e-10));
    CHECK(oned_closed_form_cpe(kPi / 8.0, 0.0) ==
          doctest::Approx(0.735915938035).epsilon(1e-10));

    const auto c = additivity_check(0.0, 0.0, kPi / 8.0, 0.3);
    CHECK(c.lhs == doctest::Approx(1.614667681968).epsilon(1e-7));
    CHECK(c.gap < 1e-6);
    CHECK(std::fabs(c.lhs - c.rhs) == doctest::Approx(c.gap).epsilon(1e-12));
}

TEST_CASE("k-average is independent of the worker count") {
    // the k-average cache keys on (coin, weight, grid), so stale entries must
    // be evicted before the second computation actually runs
    const auto coin = dft4();
    QuadratureSpec q = coarse(32);
    q.offset_fraction = 0.25;
    set_quadrature_workers(3);
    const CMatrix with3 = asymptotic_reduced_density(coin, bell_psi_plus(), PointMass{}, q).matrix;
    for (int t = 0; t < 30; ++t)  // flush the cache (capacity < 30)
        asymptotic_reduced_density(tensor(hadamard2(), hadamard2()), chi_ll(),
                                   GaussianIsotropic{0.5 + 0.01 * t}, coarse(16));
    set_quadrature_workers(1);
    const CMatrix with1 = asymptotic_reduced_density(coin, bell_psi_plus(), PointMass{}, q).matrix;
    CHECK((with3 - with1).max_abs() == 0.0);
    CHECK(quadrature_workers() == 1);
}
