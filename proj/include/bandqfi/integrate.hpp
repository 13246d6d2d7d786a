#pragma once

#include <string>
#include <vector>

#include "bandqfi/models.hpp"
#include "bandqfi/types.hpp"

namespace bandqfi {

struct QuadratureConfig {
    double rel_tol = 1e-9;        // in (0, 1e-2]
    int max_refinements = 30;     // adaptive bisection generations
    int lattice_grid_start = 64;  // points per dimension, power of two
    // 0 = per-dimension default: 4096 (d=1), 2048 (d=2), 256 (d=3).
    int lattice_max_grid = 0;
    int threads = 0;              // 0 = hardware concurrency

    int max_grid_for_dim(int d) const;
    void validate() const;        // throws std::invalid_argument
};

struct IntegralResult {
    double value = 0.0;
    double err_estimate = 0.0;
    long evaluations = 0;
    int finest_grid = 0;          // lattice only
    bool converged = true;        // false: grid budget exhausted, estimate returned
};

// Integral of the closed-form metric density over the ball |q| <= cutoff.
// The velocity rescaling x_i = v_i q_i reduces it exactly to
//   (1 / prod v_i) * S_{p-1} * int_0^cutoff dr r^{p-1} r^2 / (4 (r^2 + m^2)^2)
// with S_0 = 2, S_1 = 2pi, S_2 = 4pi. The cutoff is imposed in the rescaled
// variable (ellipsoidal in raw q), which keeps the reduction exact; see
// qfi_continuum_spherical (tests) for the raw-q spherical-cutoff cross-check.
double qfi_continuum(int p, const std::vector<double>& velocities, double m, double cutoff,
                     const QuadratureConfig& cfg = {});
IntegralResult qfi_continuum_ex(int p, const std::vector<double>& velocities, double m,
                                double cutoff, const QuadratureConfig& cfg = {});

// General continuum integrator for a linearized ModelSpec, including the
// quadratic correction and extra gapped bands. Falls back to the exact radial
// reduction whenever the metric density is isotropic in the rescaled
// variable; otherwise integrates the perturbation-sum metric on a product of
// an adaptive radial rule and a fixed angular mesh.
IntegralResult qfi_continuum_model(const ModelSpec& model, double m,
                                   const QuadratureConfig& cfg = {});

// Spherical cutoff in raw q (anisotropic models only differ from the
// ellipsoidal convention by an analytic background). Used as a cross-check.
IntegralResult qfi_continuum_spherical(const ModelSpec& model, double m,
                                       const QuadratureConfig& cfg = {});

// Brillouin-zone integral of the perturbation-sum metric on a uniform
// periodic k-mesh (trapezoid = midpoint), doubling the grid until successive
// estimates agree to rel_tol. If the grid budget runs out first, the finest
// estimate is returned with converged=false and the last doubling difference
// as its error estimate.
double qfi_lattice(const ModelSpec& model, double m, int occupied,
                   const QuadratureConfig& cfg = {});
IntegralResult qfi_lattice_ex(const ModelSpec& model, double m, int occupied,
                              const QuadratureConfig& cfg = {});

// Dimensionless scaling function
//   Phi_p(X) = S_{p-1} * int_0^X dx x^{p-1} x^2 / (4 (x^2 + 1)^2),
// related to the continuum integral by QFI(m) = m^{p-2} Phi_p(cutoff/m) for
// unit velocities -- an exact identity used as a cross-check.
double scaled_integral(int p, double X, const QuadratureConfig& cfg = {});

// Geometric grid from m_max down toward m_min with points_per_decade steps
// per decade of m; strictly decreasing, starting exactly at m_max and ending
// at the grid point nearest m_min (exactly m_min when the span is a whole
// number of steps).
std::vector<double> make_m_grid(double m_min, double m_max, int points_per_decade);

struct SweepResult {
    std::string model_id;
    std::vector<double> model_velocities;
    double cutoff = 0.0;              // continuum only
    int codimension_p = 0;
    int occupied = 0;                 // lattice only
    std::vector<double> m_values;     // strictly decreasing, all > 0
    std::vector<double> qfi_values;
    std::vector<double> err_estimates;
    QuadratureConfig config;
};

// One independent integral per grid point. A failed point aborts the sweep
// with the underlying error; there are no silent partial results.
SweepResult sweep(const ModelSpec& model, const std::vector<double>& m_grid,
                  const QuadratureConfig& cfg = {});

}  // namespace bandqfi
