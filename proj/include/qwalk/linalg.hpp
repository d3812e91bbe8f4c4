#pragma once

#include <stdexcept>
#include <vector>

#include "qwalk/matrix.hpp"

namespace qwalk {

struct HermitianEigenResult {
    std::vector<double> eigenvalues;  // ascending
    CMatrix eigenvectors;             // orthonormal columns, same order
};

/// Distinct eigenphases of a unitary with their orthogonal spectral projectors.
struct SpectralDecomposition {
    std::vector<double> phases;      // distinct, in (-pi, pi]
    std::vector<CMatrix> projectors; // Hermitian idempotents, one per phase
};

struct NonConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.
/// Requires ||H - H^dag||_max <= 1e-10.
HermitianEigenResult hermitian_eigen(const CMatrix& h);

/// Spectral decomposition of a unitary: split into the commuting Hermitian
/// parts (U+U^dag)/2 and (U-U^dag)/(2i), diagonalize jointly, then cluster
/// eigenphases within degeneracy_tol (angular) into projectors.
SpectralDecomposition unitary_eigen(const CMatrix& u, double degeneracy_tol = 1e-9);

/// von Neumann entropy in bits of a unit-trace Hermitian PSD matrix.
/// Eigenvalues in [-1e-10, eig_floor) are clamped to zero; real negativity
/// or a trace away from one is an error.
double von_neumann_entropy(const CMatrix& rho, double eig_floor = 1e-12);

/// Binary entropy -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0.
double binary_entropy(double p);

}  // namespace qwalk
