#include <doctest.h>

#include <complex>

#include "bandqfi/clifford.hpp"

using namespace bandqfi;

namespace {
const complex_t I(0.0, 1.0);
}

TEST_CASE("generator count and minimal dimension") {
    // D = 2^floor(n/2): the minimal faithful dimension for n anticommuting
    // Hermitian involutions.
    const int expected_dim[] = {1, 2, 2, 4, 4, 8, 8, 16};
    for (int n = 1; n <= 8; ++n) {
        CAPTURE(n);
        const CliffordSet set = clifford_generators(n);
        CHECK(set.n == n);
        CHECK(static_cast<int>(set.gamma.size()) == n);
        CHECK(set.dim() == expected_dim[n - 1]);
        for (const Matrix& g : set.gamma) {
            CHECK(g.rows() == expected_dim[n - 1]);
            CHECK(g.cols() == expected_dim[n - 1]);
        }
    }
}

TEST_CASE("hermiticity and anticommutation relations") {
    for (int n = 1; n <= 8; ++n) {
        const CliffordSet set = clifford_generators(n);
        const Matrix id = Matrix::Identity(set.dim(), set.dim());
        for (int i = 0; i < n; ++i) {
            CAPTURE(n);
            CAPTURE(i);
            CHECK((set.gamma[i] - set.gamma[i].adjoint()).norm() == doctest::Approx(0.0));
            for (int j = i; j < n; ++j) {
                CAPTURE(j);
                const Matrix anti = set.gamma[i] * set.gamma[j] + set.gamma[j] * set.gamma[i];
                const Matrix expected = (i == j) ? Matrix(2.0 * id) : Matrix(Matrix::Zero(set.dim(), set.dim()));
                CHECK((anti - expected).norm() <= 1e-14 * set.dim());
            }
        }
    }
}

TEST_CASE("n = 3 reproduces the Pauli matrices") {
    const CliffordSet set = clifford_generators(3);
    Matrix sx(2, 2), sy(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sy << 0, -I, I, 0;
    sz << 1, 0, 0, -1;
    CHECK((set.gamma[0] - sx).norm() == doctest::Approx(0.0));
    CHECK((set.gamma[1] - sy).norm() == doctest::Approx(0.0));
    CHECK((set.gamma[2] - sz).norm() == doctest::Approx(0.0));
}

TEST_CASE("n = 2 is the textbook (sigma_x, sigma_z) pair") {
    const CliffordSet set = clifford_generators(2);
    Matrix sx(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sz << 1, 0, 0, -1;
    CHECK((set.gamma[0] - sx).norm() == doctest::Approx(0.0));
    CHECK((set.gamma[1] - sz).norm() == doctest::Approx(0.0));
}

TEST_CASE("the last generator is diagonal with basis state 0 at +1") {
    // Models hang the mass term on the last generator; keeping it diagonal
    // makes basis state 0 a mass eigenstate, which the extra-band
    // recalibration in with_gapped_band relies on.
    for (int n = 2; n <= 8; ++n) {
        CAPTURE(n);
        const CliffordSet set = clifford_generators(n);
        const Matrix& last = set.gamma.back();
        Matrix off = last;
        off.diagonal().setZero();
        CHECK(off.norm() == 0.0);
        CHECK(last(0, 0) == complex_t(1.0, 0.0));
        for (Eigen::Index i = 0; i < last.rows(); ++i)
            CHECK(std::abs(std::abs(last(i, i)) - 1.0) == doctest::Approx(0.0));
    }
}

TEST_CASE("n = 1 is the scalar involution") {
    const CliffordSet set = clifford_generators(1);
    CHECK(set.dim() == 1);
    CHECK(set.gamma[0](0, 0) == complex_t(1.0, 0.0));
}

TEST_CASE("out-of-range generator counts are rejected") {
    CHECK_THROWS_AS(clifford_generators(0), std::invalid_argument);
    CHECK_THROWS_AS(clifford_generators(-1), std::invalid_argument);
    CHECK_THROWS_AS(clifford_generators(9), std::invalid_argument);
}

TEST_CASE("traceless above one dimension") {
    for (int n = 2; n <= 8; ++n) {
        const CliffordSet set = clifford_generators(n);
        for (const Matrix& g : set.gamma) CHECK(std::abs(g.trace()) <= 1e-14 * set.dim());
    }
}
