#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/states.hpp"

namespace qwalk {

/// Midpoint-offset uniform k-grid over the Brillouin zone, refined by doubling.
struct QuadratureSpec {
    int grid_points_per_axis = 512;  // power of 2, >= 16
    double offset_fraction = 0.5;    // grid shift in units of spacing, in [0, 1)
    double refine_tol = 1e-8;        // max entry change between successive grids
    int max_refinements = 3;
};

struct QuadratureRecord {
    std::vector<std::pair<int, double>> history;  // (M, max entry change vs previous grid)
    int final_grid = 0;
    bool converged = false;
};

/// 4x4 Hermitian, unit-trace, PSD coin density operator with provenance.
struct ReducedDensity {
    CMatrix matrix;
    std::string coin_label;
    std::string state_label;
    QuadratureRecord quadrature;
};

struct EntanglementReport {
    double entropy = 0.0;  // bits, in [0, 2]
    ReducedDensity density;
    std::vector<double> eigenvalues;  // ascending
    bool converged = false;
    std::vector<std::pair<int, double>> refinement_history;  // (M, entropy)
};

struct QuadratureNonConvergence : NonConvergenceError {
    QuadratureNonConvergence(const std::string& msg, std::vector<std::pair<int, double>> h)
        : NonConvergenceError(msg), history(std::move(h)) {}
    std::vector<std::pair<int, double>> history;  // (M, max entry change)
};

struct AdditivityCheck {
    double lhs = 0.0;  // 2D quadrature entropy
    double rhs = 0.0;  // sum of 1D closed forms
    double gap = 0.0;
};

/// P(k) = sum_omega P_omega |chi><chi| P_omega. Well-defined at degenerate
/// k-points; equal to the eigenvector-amplitude form elsewhere.
CMatrix pointwise_p_matrix(const SpectralDecomposition& spec, const CoinState& chi);

/// Asymptotic reduced coin density operator: grid average of
/// fourier_weight(pos, k) * pointwise_p_matrix(k, chi), refined until the
/// max entry change drops below quad.refine_tol. UniformLimit positions
/// route to uniform_limit_reduced_density instead.
ReducedDensity asymptotic_reduced_density(const CoinOperator& coin, const CoinState& chi,
                                          const PositionDistribution& pos,
                                          const QuadratureSpec& quad = {});

/// Extended-nonlocality limit: the delta weight collapses the integral to the
/// generic-direction limit of P(k) at k -> 0, computed exactly by splitting
/// each degenerate eigenspace of U_0 with the shift generator.
ReducedDensity uniform_limit_reduced_density(const CoinOperator& coin, const CoinState& chi);

EntanglementReport asymptotic_entanglement(const CoinOperator& coin, const CoinState& chi,
                                           const PositionDistribution& pos,
                                           const QuadratureSpec& quad = {});

/// Closed-form asymptotic entanglement of the 1D Hadamard walk started at the
/// origin with coin cos t |L> + e^{ip} sin t |R>.
double oned_closed_form_cpe(double theta, double phi);

/// 2D quadrature vs sum of 1D closed forms for a separable localized input.
AdditivityCheck additivity_check(double theta1, double phi1, double theta2, double phi2,
                                 const QuadratureSpec& quad = {});

/// Worker threads used for k-grid accumulation (results are independent of
/// this setting; chunks combine in fixed order). Default 1.
void set_quadrature_workers(int n);
int quadrature_workers();

}  // namespace qwalk
