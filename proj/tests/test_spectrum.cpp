#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "bandqfi/models.hpp"
#include "bandqfi/spectrum.hpp"

using namespace bandqfi;

namespace {

Matrix random_hermitian(int dim, std::mt19937& rng) {
    std::normal_distribution<double> normal;
    Matrix A(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) A(i, j) = complex_t(normal(rng), normal(rng));
    return 0.5 * (A + Matrix(A.adjoint()));
}

}  // namespace

TEST_CASE("2x2 closed-form eigensystem") {
    Matrix H(2, 2);
    H << complex_t(1, 0), complex_t(2, -1), complex_t(2, 1), complex_t(-1, 0);
    // Traceless 2x2: eigenvalues +-sqrt(a^2 + |b|^2) = +-sqrt(6).
    const EigenSystem es = eigh(H);
    CHECK(es.eigenvalues[0] == doctest::Approx(-std::sqrt(6.0)).epsilon(1e-14));
    CHECK(es.eigenvalues[1] == doctest::Approx(std::sqrt(6.0)).epsilon(1e-14));
    CHECK(es.residual <= 1e-13);
    CHECK((es.eigenvectors.adjoint() * es.eigenvectors - Matrix::Identity(2, 2)).norm() <=
          1e-13);
}

TEST_CASE("2x2 degenerate input keeps an orthonormal frame") {
    Matrix H(2, 2);
    H << complex_t(0.7, 0), complex_t(0, 0), complex_t(0, 0), complex_t(0.7, 0);
    const EigenSystem es = eigh(H);
    CHECK(es.eigenvalues[0] == doctest::Approx(0.7));
    CHECK(es.eigenvalues[1] == doctest::Approx(0.7));
    CHECK((es.eigenvectors.adjoint() * es.eigenvectors - Matrix::Identity(2, 2)).norm() <=
          1e-14);
}

TEST_CASE("random Hermitian matrices: order, residual, orthonormality") {
    std::mt19937 rng(42);
    for (int dim : {2, 3, 4, 5, 6, 8}) {
        for (int trial = 0; trial < 10; ++trial) {
            CAPTURE(dim);
            CAPTURE(trial);
            const Matrix H = random_hermitian(dim, rng);
            const EigenSystem es = eigh(H);
            for (int n = 0; n + 1 < dim; ++n)
                CHECK(es.eigenvalues[n] <= es.eigenvalues[n + 1]);
            CHECK(es.residual <= 1e-12 * (1.0 + H.norm()));
            CHECK((es.eigenvectors.adjoint() * es.eigenvectors -
                   Matrix::Identity(dim, dim)).norm() <= 1e-12);
            // Trace and Frobenius norm are basis-independent cross-checks.
            CHECK(es.eigenvalues.sum() == doctest::Approx(H.trace().real()).epsilon(1e-11));
            CHECK(es.eigenvalues.squaredNorm() ==
                  doctest::Approx(H.squaredNorm()).epsilon(1e-11));
        }
    }
}

TEST_CASE("non-Hermitian input is symmetrized, not trusted") {
    Matrix H(2, 2);
    H << complex_t(1, 0), complex_t(1, 0), complex_t(0, 0), complex_t(-1, 0);
    const EigenSystem es = eigh(H);  // uses (H + H^dag)/2, off-diagonal 1/2
    const double e = std::sqrt(1.0 + 0.25);
    CHECK(es.eigenvalues[1] == doctest::Approx(e).epsilon(1e-14));
}

TEST_CASE("invalid input is rejected") {
    CHECK_THROWS_AS(eigh(Matrix(0, 0)), std::invalid_argument);
    CHECK_THROWS_AS(eigh(Matrix(2, 3)), std::invalid_argument);
    Matrix H(2, 2);
    H.setZero();
    H(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(eigh(H), std::invalid_argument);
}

TEST_CASE("degeneracy threshold scales with the matrix") {
    Matrix H = Matrix::Identity(2, 2);
    CHECK(degeneracy_threshold(H) > 0.0);
    CHECK(degeneracy_threshold(Matrix(10.0 * H)) > degeneracy_threshold(H));
    CHECK(degeneracy_threshold(Matrix::Zero(2, 2)) == doctest::Approx(1e-12));
}

TEST_CASE("band gap of the linearized cone") {
    const ModelSpec model = linearized_model(1, {2.0}, 1.0);
    const double q = 0.3, m = 0.1;
    CHECK(gap(model, {q}, m, 1) ==
          doctest::Approx(2.0 * std::sqrt(4.0 * q * q + m * m)).epsilon(1e-13));
    CHECK_THROWS_AS(gap(model, {q}, m, 0), std::invalid_argument);
    CHECK_THROWS_AS(gap(model, {q}, m, 2), std::invalid_argument);
}
