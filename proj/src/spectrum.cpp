#include "bandqfi/spectrum.hpp"

#include <stdexcept>

#include "bandqfi/detail/eigh2.hpp"

namespace bandqfi {

double degeneracy_threshold(const Matrix& H) { return 1e-12 * (1.0 + H.norm()); }

EigenSystem eigh(const Matrix& H) {
    if (H.rows() != H.cols() || H.rows() == 0)
        throw std::invalid_argument("eigh: square nonempty matrix required");
    if (!H.allFinite()) throw std::invalid_argument("eigh: non-finite entries");

    const Matrix A = 0.5 * (H + H.adjoint());
    const Eigen::Index D = A.rows();

    EigenSystem es;
    if (D == 2) {
        const detail::Eigh2 r = detail::eigh2(A(0, 0).real(), A(1, 1).real(), A(0, 1));
        es.eigenvalues = RealVector(2);
        es.eigenvalues << r.e0, r.e1;
        es.eigenvectors = Matrix(2, 2);
        es.eigenvectors << r.v0[0], r.v1[0], r.v0[1], r.v1[1];
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(A);
        if (solver.info() != Eigen::Success) throw std::runtime_error("eigh: solver failed");
        es.eigenvalues = solver.eigenvalues();
        es.eigenvectors = solver.eigenvectors();
    }

    es.residual = 0.0;
    for (Eigen::Index n = 0; n < D; ++n) {
        const double rn = (A * es.eigenvectors.col(n) - es.eigenvalues[n] * es.eigenvectors.col(n)).norm();
        if (rn > es.residual) es.residual = rn;
    }
    return es;
}

double gap(const ModelSpec& model, const Momentum& k, double m, int occupied) {
    const Matrix H = evaluate(model, k, m);
    if (occupied < 1 || occupied >= H.rows())
        throw std::invalid_argument("gap: occupied must be in [1, D)");
    const EigenSystem es = eigh(H);
    return es.eigenvalues[occupied] - es.eigenvalues[occupied - 1];
}

}  // namespace bandqfi
