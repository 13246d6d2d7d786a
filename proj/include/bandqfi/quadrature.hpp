#pragma once

#include <functional>

#include "bandqfi/types.hpp"

namespace bandqfi {

struct QuadResult {
    double value = 0.0;
    double err_estimate = 0.0;
    long evaluations = 0;
};

// Adaptive bisection quadrature of f over [a, b] with a nested 7/15-point
// Gauss-Kronrod rule per panel. Panels are split until the summed Kronrod
// error estimate meets rel_tol * |integral| (plus a tiny absolute floor for
// integrals near zero). Throws ConvergenceError when max_refinements
// bisection generations are exhausted first.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double rel_tol, int max_refinements);

}  // namespace bandqfi
