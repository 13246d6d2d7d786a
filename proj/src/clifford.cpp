#include "bandqfi/clifford.hpp"

#include <stdexcept>

namespace bandqfi {

namespace {

Matrix pauli(char which) {
    Matrix s(2, 2);
    switch (which) {
        case 'x': s << 0, 1, 1, 0; break;
        case 'y': s << 0, complex_t(0, -1), complex_t(0, 1), 0; break;
        case 'z': s << 1, 0, 0, -1; break;
        default: throw std::logic_error("unknown Pauli label");
    }
    return s;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Tensor product over `slots` factors: Z in slots before `pos`, `op` at
// `pos`, identity after. pos = slots yields Z in every slot.
Matrix chain(int slots, int pos, const Matrix& op) {
    Matrix out = Matrix::Identity(1, 1);
    for (int s = 0; s < slots; ++s) {
        if (s < pos)
            out = kron(out, pauli('z'));
        else if (s == pos)
            out = kron(out, op);
        else
            out = kron(out, Matrix::Identity(2, 2));
    }
    return out;
}

Matrix zchain(int slots) { return chain(slots, slots, Matrix()); }

}  // namespace

CliffordSet clifford_generators(int n) {
    if (n < 1 || n > 8) throw std::invalid_argument("clifford_generators: n must be in [1, 8]");
    // k Pauli slots realize 2k anticommuting generators; dimension 2^floor(n/2).
    // The last generator is always the diagonal Z-chain (replacing the final
    // Y-type element when n is even): models put the mass term on the last
    // generator, and a diagonal mass matrix keeps basis state 0 a mass
    // eigenstate, e.g. n=2 gives the textbook pair (sigma_x, sigma_z).
    const int k = n / 2;
    CliffordSet set;
    set.n = n;
    set.gamma.reserve(n);
    for (int j = 0; j < k; ++j) {
        set.gamma.push_back(chain(k, j, pauli('x')));
        set.gamma.push_back(chain(k, j, pauli('y')));
    }
    if (n % 2 == 1)
        set.gamma.push_back(zchain(k));
    else if (k > 0)
        set.gamma.back() = zchain(k);
    return set;
}

}  // namespace bandqfi
