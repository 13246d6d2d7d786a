#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bandqfi {

using complex_t = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Momentum / parameter vectors passed around by value; these are tiny (d <= 3).
using Momentum = std::vector<double>;

// Thrown when an evaluation is requested at (or numerically on top of) the
// critical point: gapless spectra have no occupied-subspace metric.
struct CriticalityError : std::runtime_error {
    explicit CriticalityError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a quadrature or grid refinement exhausts its budget without
// reaching the requested tolerance and no usable estimate can be returned.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bandqfi
