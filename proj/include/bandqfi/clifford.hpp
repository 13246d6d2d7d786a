#pragma once

#include <vector>

#include "bandqfi/types.hpp"

namespace bandqfi {

// A set of mutually anticommuting Hermitian involutions (gamma matrices):
// {G_a, G_b} = 2 delta_ab I, G_a = G_a^dag, G_a^2 = I.
struct CliffordSet {
    int n = 0;                    // number of generators
    std::vector<Matrix> gamma;    // n matrices, all dim() x dim()

    int dim() const { return gamma.empty() ? 0 : static_cast<int>(gamma.front().rows()); }
};

// Builds n generators of minimal dimension 2^floor(n/2) by the standard
// tensor-product construction over Pauli matrices:
//   G_{2j-1} = Z^(j-1) x X x I^(k-j),   G_{2j} = Z^(j-1) x Y x I^(k-j)
// with k = floor(n/2); an odd n appends Z^k. Deterministic by construction.
// Requires 1 <= n <= 8.
CliffordSet clifford_generators(int n);

}  // namespace bandqfi
