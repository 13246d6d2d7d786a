#pragma once

#include <cmath>
#include <complex>

namespace bandqfi::detail {

// Closed-form eigensystem of the 2x2 Hermitian matrix [[a, b], [conj(b), c]]
// (a, c real). Eigenvalues ascending; eigenvectors orthonormal. The branch on
// the sign of (a - c)/2 keeps the normalization denominator away from zero.
struct Eigh2 {
    double e0, e1;
    std::complex<double> v0[2], v1[2];
};

inline Eigh2 eigh2(double a, double c, std::complex<double> b) {
    Eigh2 r;
    const double mean = 0.5 * (a + c);
    const double delta = 0.5 * (a - c);
    const double b2 = std::norm(b);
    const double s = std::sqrt(delta * delta + b2);
    r.e0 = mean - s;
    r.e1 = mean + s;
    if (delta >= 0) {
        const double t = delta + s;
        const double n2 = b2 + t * t;
        if (n2 == 0) {  // fully degenerate: any orthonormal basis works
            r.v0[0] = 1; r.v0[1] = 0;
            r.v1[0] = 0; r.v1[1] = 1;
            return r;
        }
        const double inv = 1.0 / std::sqrt(n2);
        r.v0[0] = -b * inv;            r.v0[1] = t * inv;
        r.v1[0] = t * inv;             r.v1[1] = std::conj(b) * inv;
    } else {
        const double t = s - delta;
        const double inv = 1.0 / std::sqrt(b2 + t * t);
        r.v0[0] = t * inv;             r.v0[1] = -std::conj(b) * inv;
        r.v1[0] = b * inv;             r.v1[1] = t * inv;
    }
    return r;
}

}  // namespace bandqfi::detail
