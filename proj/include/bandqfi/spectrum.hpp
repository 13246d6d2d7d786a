#pragma once

#include "bandqfi/models.hpp"
#include "bandqfi/types.hpp"

namespace bandqfi {

// Full eigensystem of a small dense Hermitian matrix.
struct EigenSystem {
    RealVector eigenvalues;   // ascending
    Matrix eigenvectors;      // orthonormal columns, paired to eigenvalues
    double residual = 0.0;    // max_n ||H v_n - E_n v_n||
};

// Dense Hermitian eigendecomposition. The input is symmetrized as
// (H + H^dag)/2 before solving; throws std::invalid_argument on non-finite
// entries. 2x2 matrices take a closed-form path, larger ones a direct solver.
EigenSystem eigh(const Matrix& H);

// Eigenvalues within threshold(H) = 1e-12 * (1 + ||H||) of each other are one
// degenerate cluster for projector purposes; below this the intra-cluster
// gauge is numerically meaningless.
double degeneracy_threshold(const Matrix& H);

// E_{occupied+1} - E_{occupied} (1-indexed, ascending); >= 0.
double gap(const ModelSpec& model, const Momentum& k, double m, int occupied);

}  // namespace bandqfi
